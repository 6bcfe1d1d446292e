use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use fairtab::data::{
    imbalance_ratio, label_bits, load_csv, preprocess, privileged_bits, Schema, Transformer,
};
use fairtab::metrics::{statistical_parity, Metric};

use super::{ensure_dir, write_json, write_table, PREPARED_CSV, SCHEMA_JSON, SUMMARY_JSON, TRANSFORMER_JSON};
use crate::manifest::ManifestBuilder;
use crate::CliError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrepareSummary {
    pub source: String,
    pub total_rows: usize,
    pub dropped_rows: usize,
    pub rows: usize,
    pub positive_rows: usize,
    pub negative_rows: usize,
    /// `positive:negative` with the smaller side scaled to 1.
    pub imbalance_ratio: String,
    pub protected: String,
    pub privileged_value: String,
    /// Positive-label rate of the privileged group minus the other group.
    pub dataset_sp: Metric,
    pub encoded_width: usize,
}

/// Writes the cleaned table, schema, fitted transformer and a summary.
pub fn prepare(csv: &Path, schema_path: &Path, out: &Path, args: &[String]) -> Result<PrepareSummary, CliError> {
    let schema = Schema::from_path(schema_path)?;
    let loaded = load_csv(csv, &schema)?;
    let table = preprocess(&loaded.table, &schema)?;
    let transformer = Transformer::fit(&table, &schema)?;
    let ir = imbalance_ratio(&table, &schema)?;
    let summary = PrepareSummary {
        source: csv.display().to_string(),
        total_rows: loaded.total_rows,
        dropped_rows: loaded.dropped_rows,
        rows: table.len(),
        positive_rows: ir.positive_count,
        negative_rows: ir.negative_count,
        imbalance_ratio: ir.to_string(),
        protected: schema.columns[schema.protected_index()].name.clone(),
        privileged_value: schema.privileged_value.clone(),
        dataset_sp: statistical_parity(&label_bits(&table, &schema)?, &privileged_bits(&table, &schema)?),
        encoded_width: transformer.n_dim(),
    };

    ensure_dir(out)?;
    let mut m = ManifestBuilder::new("prepare", args, out);
    m.manifest.config_paths.push(schema_path.display().to_string());
    m.input(csv)?;
    m.input(schema_path)?;
    let paths: Vec<PathBuf> = [PREPARED_CSV, SCHEMA_JSON, TRANSFORMER_JSON, SUMMARY_JSON]
        .iter()
        .map(|n| out.join(n))
        .collect();
    write_table(&paths[0], &table)?;
    write_json(&paths[1], &schema)?;
    write_json(&paths[2], &transformer)?;
    write_json(&paths[3], &summary)?;
    for p in &paths {
        m.output(p)?;
    }
    m.manifest.settings = serde_json::to_value(&summary).map_err(CliError::json)?;
    m.finish()?;
    Ok(summary)
}
