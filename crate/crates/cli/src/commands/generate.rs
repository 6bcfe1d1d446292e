use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use fairtab::checkpoint::{peek_dtype, ModelBundle};
use fairtab::data::RawTable;
use fairtab::training::sample_synthetic;
use fairtab::{DType, Scalar};

use super::{ensure_dir, write_table, SYNTHETIC_CSV};
use crate::manifest::ManifestBuilder;
use crate::CliError;

fn sample<T: Scalar>(path: &Path, n: Option<usize>, seed: u64) -> Result<(RawTable, usize), CliError> {
    let bundle = ModelBundle::<T>::load(path)?;
    let n = n.unwrap_or(bundle.meta.train_rows);
    if n == 0 {
        return Err(CliError::Input("--n must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let table = sample_synthetic(&bundle.generator, &bundle.meta.transformer, n, &mut rng)?;
    Ok((table, n))
}

/// Decodes `n` generator samples into `out/synthetic.csv`.
pub fn generate(checkpoint: &Path, n: Option<usize>, seed: u64, out: &Path, args: &[String]) -> Result<PathBuf, CliError> {
    if n == Some(0) {
        return Err(CliError::Input("--n must be at least 1".into()));
    }
    let (table, n) = match peek_dtype(checkpoint)? {
        DType::F32 => sample::<f32>(checkpoint, n, seed)?,
        DType::F64 => sample::<f64>(checkpoint, n, seed)?,
    };
    ensure_dir(out)?;
    let mut m = ManifestBuilder::new("generate", args, out);
    m.input(checkpoint)?;
    m.manifest.seeds.push(seed);
    m.manifest.settings = serde_json::json!({ "rows": n });
    let path = out.join(SYNTHETIC_CSV);
    write_table(&path, &table)?;
    m.output(&path)?;
    m.finish()?;
    Ok(path)
}
