//! Binary model bundles.
//!
//! Layout, all integers little-endian:
//!
//! ```text
//! magic    8 bytes  "FTCKPT\0\0"
//! version  u32
//! dtype    u32      0 = f32, 1 = f64
//! meta     u64 length + JSON bytes
//! arrays   u32 count, then per array:
//!          u32 name length, name, u64 rows, u64 cols, rows*cols values
//! ```

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::path::Path;

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::autodiff::{Activation, Tensor};
use crate::data::{Schema, Transformer};
use crate::nn::{Classifier, Critic, Generator, Linear};
use crate::scalar::{DType, Scalar};
use crate::training::{TrainConfig, TrainedModels};

pub const MAGIC: &[u8; 8] = b"FTCKPT\0\0";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum CheckpointError {
    #[error("checkpoint i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("not a checkpoint file")]
    BadMagic,
    #[error("checkpoint version {found} is not supported (expected {expected})")]
    Version { found: u32, expected: u32 },
    #[error("unknown dtype code {0}")]
    DType(u32),
    #[error("checkpoint metadata: {0}")]
    Metadata(String),
    #[error("checkpoint lacks array {0:?}")]
    MissingArray(String),
    #[error("array {name:?} has shape {found:?}, expected {expected:?}")]
    Shape {
        name: String,
        expected: [usize; 2],
        found: [usize; 2],
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BundleMeta {
    pub schema: Schema,
    pub transformer: Transformer,
    pub config: TrainConfig,
    /// Rows in the training table; default size for generated tables.
    pub train_rows: usize,
    pub gumbel_tau: f64,
    pub critic_slope: f64,
    pub generator_heads: usize,
    pub classifier_hidden: usize,
}

/// Everything needed to sample from, or inspect, a trained model.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelBundle<T> {
    pub meta: BundleMeta,
    pub generator: Generator<T>,
    pub critic: Critic<T>,
    pub classifier: Classifier<T>,
}

fn dtype_code(d: DType) -> u32 {
    match d {
        DType::F32 => 0,
        DType::F64 => 1,
    }
}

fn push_linear<T: Scalar>(out: &mut Vec<(String, Tensor<T>)>, prefix: &str, l: &Linear<T>) {
    out.push((format!("{prefix}.weight"), l.weight.clone()));
    out.push((format!("{prefix}.bias"), l.bias.clone()));
}

struct Arrays<T>(BTreeMap<String, Tensor<T>>);

impl<T: Scalar> Arrays<T> {
    fn take(&mut self, name: &str) -> Result<Tensor<T>, CheckpointError> {
        self.0.remove(name).ok_or_else(|| CheckpointError::MissingArray(name.to_string()))
    }

    fn linear(&mut self, prefix: &str) -> Result<Linear<T>, CheckpointError> {
        let weight = self.take(&format!("{prefix}.weight"))?;
        let bias = self.take(&format!("{prefix}.bias"))?;
        let want = [1, weight.cols()];
        if bias.shape() != want {
            return Err(CheckpointError::Shape {
                name: format!("{prefix}.bias"),
                expected: want,
                found: bias.shape(),
            });
        }
        Ok(Linear { weight, bias })
    }

    fn has(&self, prefix: &str) -> bool {
        self.0.contains_key(&format!("{prefix}.weight"))
    }
}

impl<T: Scalar> ModelBundle<T> {
    pub fn from_training(
        models: &TrainedModels<T>,
        schema: &Schema,
        transformer: &Transformer,
        config: &TrainConfig,
        train_rows: usize,
    ) -> Self {
        let slope = match models.critic.activation {
            Activation::LeakyRelu { slope } => slope,
            _ => 0.0,
        };
        Self {
            meta: BundleMeta {
                schema: schema.clone(),
                transformer: transformer.clone(),
                config: config.clone(),
                train_rows,
                gumbel_tau: models.generator.tau,
                critic_slope: slope,
                generator_heads: models.generator.heads.len(),
                classifier_hidden: models.classifier.hidden.len(),
            },
            generator: models.generator.clone(),
            critic: models.critic.clone(),
            classifier: models.classifier.clone(),
        }
    }

    fn arrays(&self) -> Vec<(String, Tensor<T>)> {
        let mut out = Vec::new();
        push_linear(&mut out, "generator.hidden", &self.generator.hidden);
        if let Some(n) = &self.generator.numeric {
            push_linear(&mut out, "generator.numeric", n);
        }
        for (i, h) in self.generator.heads.iter().enumerate() {
            push_linear(&mut out, &format!("generator.heads.{i}"), h);
        }
        for (i, h) in self.critic.hidden.iter().enumerate() {
            push_linear(&mut out, &format!("critic.hidden.{i}"), h);
        }
        push_linear(&mut out, "critic.output", &self.critic.output);
        for (i, h) in self.classifier.hidden.iter().enumerate() {
            push_linear(&mut out, &format!("classifier.hidden.{i}"), h);
        }
        push_linear(&mut out, "classifier.output", &self.classifier.output);
        out
    }

    pub fn write<W: Write>(&self, mut w: W) -> Result<(), CheckpointError> {
        w.write_all(MAGIC)?;
        w.write_u32::<LittleEndian>(FORMAT_VERSION)?;
        w.write_u32::<LittleEndian>(dtype_code(T::DTYPE))?;
        let meta = serde_json::to_vec(&self.meta).map_err(|e| CheckpointError::Metadata(e.to_string()))?;
        w.write_u64::<LittleEndian>(meta.len() as u64)?;
        w.write_all(&meta)?;
        let arrays = self.arrays();
        w.write_u32::<LittleEndian>(arrays.len() as u32)?;
        for (name, t) in &arrays {
            w.write_u32::<LittleEndian>(name.len() as u32)?;
            w.write_all(name.as_bytes())?;
            w.write_u64::<LittleEndian>(t.rows() as u64)?;
            w.write_u64::<LittleEndian>(t.cols() as u64)?;
            for &v in t.data() {
                match T::DTYPE {
                    DType::F32 => w.write_f32::<LittleEndian>(v.to_f32().expect("f32 value"))?,
                    DType::F64 => w.write_f64::<LittleEndian>(v.to_f64_lossy())?,
                }
            }
        }
        w.flush()?;
        Ok(())
    }

    /// Reads a bundle of either stored dtype, converting values to `T`.
    pub fn read<R: Read>(mut r: R) -> Result<Self, CheckpointError> {
        let stored = read_header(&mut r)?;
        let len = r.read_u64::<LittleEndian>()? as usize;
        let mut meta = vec![0u8; len];
        r.read_exact(&mut meta)?;
        let meta: BundleMeta =
            serde_json::from_slice(&meta).map_err(|e| CheckpointError::Metadata(e.to_string()))?;
        let count = r.read_u32::<LittleEndian>()?;
        let mut arrays = BTreeMap::new();
        for _ in 0..count {
            let nlen = r.read_u32::<LittleEndian>()? as usize;
            let mut name = vec![0u8; nlen];
            r.read_exact(&mut name)?;
            let name = String::from_utf8(name).map_err(|e| CheckpointError::Metadata(e.to_string()))?;
            let rows = r.read_u64::<LittleEndian>()? as usize;
            let cols = r.read_u64::<LittleEndian>()? as usize;
            let mut data = Vec::with_capacity(rows * cols);
            for _ in 0..rows * cols {
                let v = match stored {
                    DType::F32 => f64::from(r.read_f32::<LittleEndian>()?),
                    DType::F64 => r.read_f64::<LittleEndian>()?,
                };
                data.push(T::from_f64_lossy(v));
            }
            let t = Tensor::new(rows, cols, data).map_err(|e| CheckpointError::Metadata(e.to_string()))?;
            arrays.insert(name, t);
        }
        let mut a = Arrays(arrays);
        let generator = Generator {
            hidden: a.linear("generator.hidden")?,
            numeric: if a.has("generator.numeric") {
                Some(a.linear("generator.numeric")?)
            } else {
                None
            },
            heads: (0..meta.generator_heads)
                .map(|i| a.linear(&format!("generator.heads.{i}")))
                .collect::<Result<_, _>>()?,
            tau: meta.gumbel_tau,
        };
        let mut critic_hidden = Vec::new();
        while a.has(&format!("critic.hidden.{}", critic_hidden.len())) {
            critic_hidden.push(a.linear(&format!("critic.hidden.{}", critic_hidden.len()))?);
        }
        let critic = Critic {
            hidden: critic_hidden,
            activation: Activation::LeakyRelu {
                slope: meta.critic_slope,
            },
            output: a.linear("critic.output")?,
        };
        let classifier = Classifier {
            hidden: (0..meta.classifier_hidden)
                .map(|i| a.linear(&format!("classifier.hidden.{i}")))
                .collect::<Result<_, _>>()?,
            output: a.linear("classifier.output")?,
        };
        let n = meta.transformer.n_dim();
        if generator.noise_dim() != n || generator.output_dim() != n || critic.input_dim() != n {
            return Err(CheckpointError::Metadata(format!(
                "network widths do not match the transformer width {n}"
            )));
        }
        Ok(Self {
            meta,
            generator,
            critic,
            classifier,
        })
    }

    pub fn save(&self, path: &Path) -> Result<(), CheckpointError> {
        let f = std::fs::File::create(path)?;
        self.write(std::io::BufWriter::new(f))
    }

    pub fn load(path: &Path) -> Result<Self, CheckpointError> {
        let f = std::fs::File::open(path)?;
        Self::read(std::io::BufReader::new(f))
    }
}

fn read_header<R: Read>(r: &mut R) -> Result<DType, CheckpointError> {
    let mut magic = [0u8; 8];
    r.read_exact(&mut magic).map_err(|_| CheckpointError::BadMagic)?;
    if &magic != MAGIC {
        return Err(CheckpointError::BadMagic);
    }
    let version = r.read_u32::<LittleEndian>()?;
    if version != FORMAT_VERSION {
        return Err(CheckpointError::Version {
            found: version,
            expected: FORMAT_VERSION,
        });
    }
    match r.read_u32::<LittleEndian>()? {
        0 => Ok(DType::F32),
        1 => Ok(DType::F64),
        c => Err(CheckpointError::DType(c)),
    }
}

/// Stored dtype of a checkpoint file, read from its header.
pub fn peek_dtype(path: &Path) -> Result<DType, CheckpointError> {
    let mut f = std::fs::File::open(path)?;
    read_header(&mut f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::toy::{biased_toy, toy_schema};
    use crate::training::train;

    fn bundle() -> ModelBundle<f32> {
        let schema = toy_schema();
        let table = biased_toy(200, 3);
        let tr = Transformer::fit(&table, &schema).unwrap();
        let data = tr.transform(&table).unwrap();
        let mut cfg = TrainConfig::default();
        cfg.total_epochs = 2;
        cfg.fair_epochs = 1;
        cfg.classifier.epochs = 2;
        let models = train::<f32, _>(&data, &cfg, &mut ()).unwrap();
        ModelBundle::from_training(&models, &schema, &tr, &cfg, 200)
    }

    #[test]
    fn round_trip_is_exact() {
        let b = bundle();
        let mut buf = Vec::new();
        b.write(&mut buf).unwrap();
        assert_eq!(&buf[..8], MAGIC);
        let back = ModelBundle::<f32>::read(buf.as_slice()).unwrap();
        assert_eq!(back, b);
        let mut again = Vec::new();
        back.write(&mut again).unwrap();
        assert_eq!(again, buf);
        let wide = ModelBundle::<f64>::read(buf.as_slice()).unwrap();
        assert_eq!(wide.generator.cast::<f32>(), b.generator);
    }

    #[test]
    fn rejects_other_versions_and_garbage() {
        let mut buf = Vec::new();
        bundle().write(&mut buf).unwrap();
        buf[8] = 2;
        assert!(matches!(
            ModelBundle::<f32>::read(buf.as_slice()),
            Err(CheckpointError::Version { found: 2, expected: 1 })
        ));
        assert!(matches!(
            ModelBundle::<f32>::read(&b"not a checkpoint"[..]),
            Err(CheckpointError::BadMagic)
        ));
        buf[8] = 1;
        buf.truncate(buf.len() - 3);
        assert!(matches!(ModelBundle::<f32>::read(buf.as_slice()), Err(CheckpointError::Io(_))));
    }
}
