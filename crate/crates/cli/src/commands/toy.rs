use std::path::{Path, PathBuf};

use fairtab::toy::{biased_toy, toy_schema};

use super::{ensure_dir, write_json, write_table, SCHEMA_JSON};
use crate::manifest::ManifestBuilder;
use crate::CliError;

pub const TOY_CSV: &str = "toy.csv";

/// Writes `toy.csv` and its schema into `out`.
pub fn toy(n: usize, seed: u64, out: &Path, args: &[String]) -> Result<PathBuf, CliError> {
    if n == 0 {
        return Err(CliError::Input("--n must be at least 1".into()));
    }
    ensure_dir(out)?;
    let mut m = ManifestBuilder::new("toy", args, out);
    m.manifest.seeds.push(seed);
    let csv = out.join(TOY_CSV);
    let schema = out.join(SCHEMA_JSON);
    write_table(&csv, &biased_toy(n, seed))?;
    write_json(&schema, &toy_schema())?;
    m.output(&csv)?;
    m.output(&schema)?;
    m.finish()?;
    Ok(csv)
}
