mod benchmark;
mod generate;
mod prepare;
mod toy;
mod train;

pub use benchmark::{benchmark, parse_synthetic_arg};
pub use generate::generate;
pub use prepare::{prepare, PrepareSummary};
pub use toy::toy;
pub use train::train;

use std::path::Path;

use serde::Serialize;

use crate::manifest::write_atomic;
use crate::CliError;

pub const PREPARED_CSV: &str = "prepared.csv";
pub const SCHEMA_JSON: &str = "schema.json";
pub const TRANSFORMER_JSON: &str = "transformer.json";
pub const SUMMARY_JSON: &str = "summary.json";
pub const CHECKPOINT: &str = "model.ckpt";
pub const HISTORY_CSV: &str = "history.csv";
pub const SYNTHETIC_CSV: &str = "synthetic.csv";

fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    write_atomic(path, |buf| {
        serde_json::to_writer_pretty(&mut *buf, value).map_err(CliError::json)?;
        buf.push(b'\n');
        Ok(())
    })
}

fn write_table(path: &Path, table: &fairtab::data::RawTable) -> Result<(), CliError> {
    write_atomic(path, |buf| Ok(table.write_csv(buf)?))
}
