use std::path::{Path, PathBuf};

use fairtab::data::{load_prepared, Schema};
use fairtab::eval::{
    benchmark as run_benchmark, write_dataset_sp, write_metrics_table, write_report_json, write_roc_points,
    EvalSettings, EvaluationReport,
};

use super::{ensure_dir, read_text};
use crate::manifest::{write_atomic, ManifestBuilder};
use crate::CliError;

pub const DATASET_SP_CSV: &str = "dataset_sp.csv";
pub const METRICS_CSV: &str = "metrics.csv";
pub const REPORT_JSON: &str = "report.json";
pub const ROC_CSV: &str = "roc_points.csv";

/// `NAME=PATH`, or a bare path named by its file stem.
pub fn parse_synthetic_arg(arg: &str) -> (String, PathBuf) {
    match arg.split_once('=') {
        Some((name, path)) if !name.is_empty() => (name.to_string(), PathBuf::from(path)),
        _ => {
            let p = PathBuf::from(arg);
            let name = p.file_stem().map_or_else(|| arg.to_string(), |s| s.to_string_lossy().into_owned());
            (name, p)
        }
    }
}

pub fn benchmark(
    real: &Path,
    synthetic: &[String],
    schema_path: &Path,
    config: Option<&Path>,
    seed: Option<u64>,
    out: &Path,
    args: &[String],
) -> Result<EvaluationReport, CliError> {
    let schema = Schema::from_path(schema_path)?;
    let real_table = load_prepared(real, &schema)?.table;
    let mut settings = match config {
        Some(p) => serde_json::from_str::<EvalSettings>(&read_text(p)?).map_err(CliError::json)?,
        None => EvalSettings::default(),
    };
    if let Some(s) = seed {
        settings.seed = s;
    }
    let mut sources = Vec::new();
    let mut inputs = vec![real.to_path_buf(), schema_path.to_path_buf()];
    for arg in synthetic {
        let (name, path) = parse_synthetic_arg(arg);
        if sources.iter().any(|(n, _)| *n == name) || name == "Original" {
            return Err(CliError::Input(format!("duplicate method name {name:?}")));
        }
        sources.push((name, load_prepared(&path, &schema)?.table));
        inputs.push(path);
    }
    let dataset = real.file_stem().map_or_else(String::new, |s| s.to_string_lossy().into_owned());
    let (report, ev) = run_benchmark(&dataset, real_table, schema, &sources, settings.clone())?;

    ensure_dir(out)?;
    let mut m = ManifestBuilder::new("benchmark", args, out);
    for p in &inputs {
        m.input(p)?;
    }
    if let Some(p) = config {
        m.manifest.config_paths.push(p.display().to_string());
        m.input(p)?;
    }
    m.manifest.seeds.push(settings.seed);
    m.manifest.settings = serde_json::to_value(&settings).map_err(CliError::json)?;

    let files = [DATASET_SP_CSV, METRICS_CSV, REPORT_JSON, ROC_CSV].map(|n| out.join(n));
    write_atomic(&files[0], |b| Ok(write_dataset_sp(&report, &mut *b)?))?;
    write_atomic(&files[1], |b| Ok(write_metrics_table(&report, &mut *b)?))?;
    write_atomic(&files[2], |b| Ok(write_report_json(&report, &mut *b)?))?;
    write_atomic(&files[3], |b| Ok(write_roc_points(&report, &ev, &mut *b)?))?;
    for f in &files {
        m.output(f)?;
    }
    m.finish()?;
    Ok(report)
}
