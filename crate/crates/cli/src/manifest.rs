use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::CliError;

pub const MANIFEST_NAME: &str = "manifest.json";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FileRecord {
    pub path: String,
    pub sha256: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub epoch: Option<usize>,
    pub batch: Option<usize>,
    pub message: String,
}

/// What ran, on which inputs, and what it wrote.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub tool_version: String,
    pub args: Vec<String>,
    pub config_paths: Vec<String>,
    pub seeds: Vec<u64>,
    pub inputs: Vec<FileRecord>,
    pub outputs: Vec<FileRecord>,
    /// Command-specific settings, such as the resolved training config.
    pub settings: serde_json::Value,
    pub status: String,
    pub failure: Option<Failure>,
    pub wall_clock_seconds: f64,
}

pub fn sha256_file(path: &Path) -> Result<String, CliError> {
    let bytes = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
    Ok(Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect())
}

/// Writes through a sibling temp file and renames it into place.
pub fn write_atomic(path: &Path, f: impl FnOnce(&mut Vec<u8>) -> Result<(), CliError>) -> Result<(), CliError> {
    let mut buf = Vec::new();
    f(&mut buf)?;
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("out");
    let tmp = path.with_file_name(format!(".{name}.tmp"));
    let mut file = std::fs::File::create(&tmp).map_err(|e| CliError::io(&tmp, e))?;
    file.write_all(&buf).map_err(|e| CliError::io(&tmp, e))?;
    file.sync_all().map_err(|e| CliError::io(&tmp, e))?;
    std::fs::rename(&tmp, path).map_err(|e| CliError::io(path, e))
}

pub struct ManifestBuilder {
    start: Instant,
    pub manifest: RunManifest,
    out_dir: PathBuf,
}

impl ManifestBuilder {
    pub fn new(command: &str, args: &[String], out_dir: &Path) -> Self {
        Self {
            start: Instant::now(),
            manifest: RunManifest {
                command: command.to_string(),
                tool_version: env!("CARGO_PKG_VERSION").to_string(),
                args: args.to_vec(),
                config_paths: Vec::new(),
                seeds: Vec::new(),
                inputs: Vec::new(),
                outputs: Vec::new(),
                settings: serde_json::Value::Null,
                status: "ok".into(),
                failure: None,
                wall_clock_seconds: 0.0,
            },
            out_dir: out_dir.to_path_buf(),
        }
    }

    pub fn input(&mut self, path: &Path) -> Result<(), CliError> {
        self.manifest.inputs.push(FileRecord {
            path: path.display().to_string(),
            sha256: sha256_file(path)?,
        });
        Ok(())
    }

    pub fn output(&mut self, path: &Path) -> Result<(), CliError> {
        self.manifest.outputs.push(FileRecord {
            path: path.display().to_string(),
            sha256: sha256_file(path)?,
        });
        Ok(())
    }

    pub fn fail(&mut self, err: &CliError) {
        self.manifest.status = "failed".into();
        let (epoch, batch) = err.position().unzip();
        self.manifest.failure = Some(Failure {
            epoch,
            batch,
            message: err.to_string(),
        });
    }

    pub fn finish(mut self) -> Result<PathBuf, CliError> {
        self.manifest.wall_clock_seconds = self.start.elapsed().as_secs_f64();
        let path = self.out_dir.join(MANIFEST_NAME);
        write_atomic(&path, |buf| {
            serde_json::to_writer_pretty(&mut *buf, &self.manifest).map_err(CliError::json)?;
            buf.push(b'\n');
            Ok(())
        })?;
        Ok(path)
    }
}
