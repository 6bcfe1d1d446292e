use std::path::Path;

use fairtab::checkpoint::ModelBundle;
use fairtab::data::{load_csv, Schema, Transformer};
use fairtab::training::{train as run_training, write_history_csv, TrainConfig, TrainedModels, Variant};
use fairtab::{DType, Scalar};

use super::{ensure_dir, read_text, CHECKPOINT, HISTORY_CSV, PREPARED_CSV, SCHEMA_JSON, TRANSFORMER_JSON};
use crate::manifest::{write_atomic, ManifestBuilder};
use crate::CliError;

/// Loads the config file (or defaults) and applies flag overrides.
pub fn resolve_config(
    path: Option<&Path>,
    variant: Option<Variant>,
    seed: Option<u64>,
) -> Result<TrainConfig, CliError> {
    let mut cfg = match path {
        Some(p) => TrainConfig::from_json_str(&read_text(p)?)?,
        None => TrainConfig::default(),
    };
    if let Some(v) = variant {
        cfg.variant = v;
    }
    if let Some(s) = seed {
        cfg.seed = s;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn save<T: Scalar>(
    models: &TrainedModels<T>,
    schema: &Schema,
    transformer: &Transformer,
    cfg: &TrainConfig,
    rows: usize,
    out: &Path,
) -> Result<(), CliError> {
    let bundle = ModelBundle::from_training(models, schema, transformer, cfg, rows);
    write_atomic(&out.join(CHECKPOINT), |buf| Ok(bundle.write(&mut *buf)?))?;
    write_atomic(&out.join(HISTORY_CSV), |buf| {
        write_history_csv(&models.history, &mut *buf).map_err(|e| CliError::io(&out.join(HISTORY_CSV), e))
    })
}

/// Trains on a prepared directory; writes the checkpoint, loss history and
/// manifest into `out`.
pub fn train(
    prepared: &Path,
    config: Option<&Path>,
    variant: Option<Variant>,
    seed: Option<u64>,
    out: &Path,
    args: &[String],
) -> Result<TrainConfig, CliError> {
    let schema_path = prepared.join(SCHEMA_JSON);
    let transformer_path = prepared.join(TRANSFORMER_JSON);
    let csv_path = prepared.join(PREPARED_CSV);
    let schema = Schema::from_path(&schema_path)?;
    let transformer: Transformer =
        serde_json::from_str(&read_text(&transformer_path)?).map_err(CliError::json)?;
    let table = load_csv(&csv_path, &schema)?.table;
    let cfg = resolve_config(config, variant, seed)?;
    let data = transformer.transform(&table)?;

    ensure_dir(out)?;
    let mut m = ManifestBuilder::new("train", args, out);
    for p in [&csv_path, &schema_path, &transformer_path] {
        m.input(p)?;
    }
    if let Some(p) = config {
        m.manifest.config_paths.push(p.display().to_string());
        m.input(p)?;
    }
    m.manifest.seeds.push(cfg.seed);
    m.manifest.settings = serde_json::json!({
        "config": cfg,
        "fairness_phase_skipped": cfg.variant == Variant::None,
        "train_rows": table.len(),
    });

    let result = match cfg.dtype {
        DType::F32 => run_training::<f32, _>(&data, &cfg, &mut ())
            .map_err(CliError::from)
            .and_then(|mdl| save(&mdl, &schema, &transformer, &cfg, table.len(), out)),
        DType::F64 => run_training::<f64, _>(&data, &cfg, &mut ())
            .map_err(CliError::from)
            .and_then(|mdl| save(&mdl, &schema, &transformer, &cfg, table.len(), out)),
    };
    match result {
        Ok(()) => {
            m.output(&out.join(CHECKPOINT))?;
            m.output(&out.join(HISTORY_CSV))?;
            m.finish()?;
            Ok(cfg)
        }
        Err(e) => {
            m.fail(&e);
            m.finish()?;
            Err(e)
        }
    }
}
