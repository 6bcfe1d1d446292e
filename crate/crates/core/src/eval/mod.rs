//! Cross-validated benchmark of baseline classifiers on real and
//! synthetic tables.

mod folds;
mod harness;
pub mod models;
mod report;

pub use folds::{kfold_split, FoldPlan, DEFAULT_FOLDS};
pub use harness::{
    benchmark, EvalSettings, EvaluationReport, Evaluator, FoldOutcome, KindSummary, SourceReport,
};
pub use models::{fit, fit_predict, ClassifierKind, FeatureMatrix, ModelParams};
pub use report::{write_dataset_sp, write_metrics_table, write_report_json, write_roc_points};

use thiserror::Error;

use crate::data::DataError;
use crate::metrics::MetricsError;
use crate::nn::NnError;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Nn(#[from] NnError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error("class {class} has {count} rows, fewer than {folds} folds")]
    TooFewPerClass { class: bool, count: usize, folds: usize },
    #[error("synthetic header {found:?} differs from the real header {expected:?}")]
    SchemaMismatch {
        expected: Vec<String>,
        found: Vec<String>,
    },
    #[error("{0}")]
    InvalidConfig(String),
    #[error("write failed: {0}")]
    Io(String),
}
