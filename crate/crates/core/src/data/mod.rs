//! CSV ingestion, protected-attribute preprocessing and the mixed-type
//! transformer.

mod schema;
mod table;
mod transform;

pub use schema::{ColumnKind, ColumnSpec, Role, Schema};
pub use table::{
    binarize_age, binarize_protected, imbalance_ratio, label_bits, load_csv, load_prepared,
    preprocess, privileged_bits, read_csv, Cell, ImbalanceRatio, LoadedTable, RawTable,
    AGE_IN_RANGE, AGE_OTHER, NON_PRIVILEGED,
};
pub use transform::{
    Block, BlockLayout, ColumnCodec, ContinuousCodec, EncodedMatrix, Encoding, Transformer,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DataError {
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("csv: {0}")]
    Csv(String),
    #[error("schema: {0}")]
    SchemaParse(String),
    #[error("invalid schema: {0}")]
    InvalidSchema(String),
    #[error("header {found:?} does not match schema columns {expected:?}")]
    HeaderMismatch {
        expected: Vec<String>,
        found: Vec<String>,
    },
    #[error("line {line}, column {column:?}: cannot parse {value:?} as a number")]
    Parse {
        column: String,
        line: usize,
        value: String,
    },
    #[error("row {row}, column {column:?}: expected a {expected} cell")]
    CellType {
        column: String,
        row: usize,
        expected: &'static str,
    },
    #[error("no rows left after cleaning")]
    EmptyTable,
    #[error("unknown column {0:?}")]
    UnknownColumn(String),
    #[error("continuous column {0:?} has zero variance")]
    ZeroVariance(String),
    #[error("column {column:?} needs exactly 2 categories, found {categories}")]
    DegenerateColumn { column: String, categories: usize },
    #[error("column {column:?}: category {value:?} was not seen at fit time")]
    UnseenCategory { column: String, value: String },
    #[error("encoded width {found} does not match transformer width {expected}")]
    WidthMismatch { expected: usize, found: usize },
}
