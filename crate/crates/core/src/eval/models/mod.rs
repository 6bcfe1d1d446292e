//! Baseline predictive models used by the benchmark.

mod knn;
mod logistic;
mod tree;

pub use knn::Knn;
pub use logistic::{Logistic, LogisticConfig};
pub use tree::{DecisionTree, TreeNode};

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::EvalError;
use crate::autodiff::Tensor;
use crate::nn::{train_classifier, Classifier, ClassifierConfig};

/// Dense row-major feature matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct FeatureMatrix {
    pub data: Vec<f64>,
    pub rows: usize,
    pub cols: usize,
}

impl FeatureMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self, EvalError> {
        if data.len() != rows * cols {
            return Err(EvalError::InvalidConfig(format!(
                "feature buffer of {} values for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { data, rows, cols })
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn select(&self, idx: &[usize]) -> Self {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            data.extend_from_slice(self.row(i));
        }
        Self {
            data,
            rows: idx.len(),
            cols: self.cols,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ClassifierKind {
    #[serde(rename = "LR")]
    Lr,
    #[serde(rename = "DT")]
    Dt,
    #[serde(rename = "kNN")]
    Knn,
    #[serde(rename = "MLP")]
    Mlp,
}

impl ClassifierKind {
    pub const ALL: [ClassifierKind; 4] = [Self::Lr, Self::Dt, Self::Knn, Self::Mlp];

    pub fn name(self) -> &'static str {
        match self {
            Self::Lr => "LR",
            Self::Dt => "DT",
            Self::Knn => "kNN",
            Self::Mlp => "MLP",
        }
    }
}

impl fmt::Display for ClassifierKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ClassifierKind {
    type Err = EvalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| EvalError::InvalidConfig(format!("unknown classifier {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelParams {
    pub logistic: LogisticConfig,
    pub knn_k: usize,
    pub mlp: ClassifierConfig,
}

impl Default for ModelParams {
    fn default() -> Self {
        Self {
            logistic: LogisticConfig::default(),
            knn_k: 5,
            mlp: ClassifierConfig::default(),
        }
    }
}

impl ModelParams {
    pub fn validate(&self) -> Result<(), EvalError> {
        self.logistic.validate()?;
        if self.knn_k == 0 {
            return Err(EvalError::InvalidConfig("knn_k must be positive".into()));
        }
        self.mlp
            .validate()
            .map_err(|e| EvalError::InvalidConfig(e.to_string()))
    }
}

#[derive(Clone, Debug)]
pub enum FittedModel {
    /// Single-class training data: every score is the class prior.
    Constant(f64),
    Logistic(Logistic),
    Knn(Knn),
    Tree(DecisionTree),
    Mlp(Classifier<f32>),
}

impl FittedModel {
    /// Positive-class scores in `[0, 1]`.
    pub fn scores(&self, x: &FeatureMatrix) -> Result<Vec<f64>, EvalError> {
        let raw = match self {
            Self::Constant(p) => vec![*p; x.rows],
            Self::Logistic(m) => m.scores(x),
            Self::Knn(m) => m.scores(x),
            Self::Tree(m) => m.scores(x),
            Self::Mlp(m) => {
                let t = Tensor::<f32>::from_f64(x.rows, x.cols, &x.data)
                    .map_err(|e| EvalError::InvalidConfig(e.to_string()))?;
                m.predict_proba(&t)?
            }
        };
        Ok(raw.into_iter().map(|s| s.clamp(0.0, 1.0)).collect())
    }
}

pub fn fit(
    kind: ClassifierKind,
    params: &ModelParams,
    x: &FeatureMatrix,
    y: &[bool],
    seed: u64,
) -> Result<FittedModel, EvalError> {
    if y.len() != x.rows || y.is_empty() {
        return Err(EvalError::InvalidConfig(format!(
            "{} labels for {} training rows",
            y.len(),
            x.rows
        )));
    }
    let pos = y.iter().filter(|&&b| b).count();
    if pos == 0 || pos == y.len() {
        return Ok(FittedModel::Constant(if pos == 0 { 0.0 } else { 1.0 }));
    }
    Ok(match kind {
        ClassifierKind::Lr => FittedModel::Logistic(Logistic::fit(x, y, &params.logistic)),
        ClassifierKind::Dt => FittedModel::Tree(DecisionTree::fit(x, y)),
        ClassifierKind::Knn => FittedModel::Knn(Knn::fit(x, y, params.knn_k)),
        ClassifierKind::Mlp => {
            let t = Tensor::<f32>::from_f64(x.rows, x.cols, &x.data)
                .map_err(|e| EvalError::InvalidConfig(e.to_string()))?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            FittedModel::Mlp(train_classifier(&t, y, &params.mlp, &mut rng)?.0)
        }
    })
}

/// Hard predictions (`score ≥ 0.5`) and scores on `test`.
pub fn fit_predict(
    kind: ClassifierKind,
    params: &ModelParams,
    train_x: &FeatureMatrix,
    train_y: &[bool],
    test_x: &FeatureMatrix,
    seed: u64,
) -> Result<(Vec<bool>, Vec<f64>), EvalError> {
    let model = fit(kind, params, train_x, train_y, seed)?;
    let scores = model.scores(test_x)?;
    Ok((scores.iter().map(|&s| s >= 0.5).collect(), scores))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand_distr::StandardNormal;

    pub(crate) fn blobs(n: usize, seed: u64) -> (FeatureMatrix, Vec<bool>) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut data = Vec::new();
        let mut y = Vec::new();
        for i in 0..n {
            let c = i % 2 == 0;
            let mu = if c { 1.5 } else { -1.5 };
            for _ in 0..3 {
                let e: f64 = rng.sample(StandardNormal);
                data.push(mu + 0.4 * e);
            }
            y.push(c);
        }
        (FeatureMatrix::new(n, 3, data).unwrap(), y)
    }

    #[test]
    fn every_kind_separates_blobs() {
        let (x, y) = blobs(400, 1);
        let (tx, ty) = blobs(200, 2);
        let mut params = ModelParams::default();
        params.mlp.epochs = 20;
        for kind in ClassifierKind::ALL {
            let (pred, scores) = fit_predict(kind, &params, &x, &y, &tx, 5).unwrap();
            let acc = pred.iter().zip(&ty).filter(|(a, b)| a == b).count() as f64 / 200.0;
            assert!(acc >= 0.99, "{kind}: {acc}");
            assert!(scores.iter().all(|s| (0.0..=1.0).contains(s)));
        }
    }

    #[test]
    fn single_class_gives_the_prior() {
        let (x, _) = blobs(10, 1);
        for kind in ClassifierKind::ALL {
            let (p, s) = fit_predict(kind, &ModelParams::default(), &x, &[true; 10], &x, 0).unwrap();
            assert!(p.iter().all(|&b| b) && s.iter().all(|&v| v == 1.0));
        }
    }

    #[test]
    fn kind_names_round_trip() {
        for k in ClassifierKind::ALL {
            assert_eq!(k.name().parse::<ClassifierKind>().unwrap(), k);
            assert_eq!(serde_json::to_string(&k).unwrap(), format!("\"{}\"", k.name()));
        }
    }
}
