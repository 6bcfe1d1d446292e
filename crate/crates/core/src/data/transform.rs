//! Mixed-type encoding: standardized-then-rescaled continuous columns
//! followed by one one-hot block per categorical column.

use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::autodiff::Tensor;
use crate::scalar::Scalar;

use super::schema::{ColumnKind, Role, Schema};
use super::table::{Cell, RawTable};
use super::DataError;

/// Encoding parameters of one continuous column.
///
/// `u = ((x − mean)/std − post_min) / post_range` so that the fitted
/// minimum maps to 0 and the fitted maximum to 1.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContinuousCodec {
    pub mean: f64,
    pub std: f64,
    pub post_min: f64,
    pub post_range: f64,
}

impl ContinuousCodec {
    pub fn encode(&self, x: f64) -> f64 {
        ((x - self.mean) / self.std - self.post_min) / self.post_range
    }

    pub fn decode(&self, u: f64) -> f64 {
        (u * self.post_range + self.post_min) * self.std + self.mean
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Encoding {
    Continuous(ContinuousCodec),
    Categorical { categories: Vec<String> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ColumnCodec {
    pub name: String,
    pub role: Role,
    pub encoding: Encoding,
}

/// Where one source column lives in an encoded row.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    pub column: usize,
    pub kind: ColumnKind,
    pub start: usize,
    pub width: usize,
}

impl Block {
    pub fn range(&self) -> Range<usize> {
        self.start..self.start + self.width
    }
}

/// Column-block map of an encoded row: `[numeric | one-hot blocks]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockLayout {
    /// Indexed by source column.
    pub blocks: Vec<Block>,
    pub n_num: usize,
    pub n_dim: usize,
    /// Source column index of the label and its positive category index.
    pub label_column: usize,
    pub positive_index: usize,
    /// Source column index of the protected attribute and its privileged
    /// category index.
    pub protected_column: usize,
    pub privileged_index: usize,
}

impl BlockLayout {
    /// Categorical blocks in encoded order.
    pub fn categorical_blocks(&self) -> Vec<&Block> {
        let mut v: Vec<&Block> = self
            .blocks
            .iter()
            .filter(|b| b.kind == ColumnKind::Categorical)
            .collect();
        v.sort_by_key(|b| b.start);
        v
    }

    pub fn label_block(&self) -> &Block {
        &self.blocks[self.label_column]
    }

    pub fn protected_block(&self) -> &Block {
        &self.blocks[self.protected_column]
    }

    /// Encoded column ranges left after removing the label block.
    pub fn feature_ranges(&self) -> Vec<Range<usize>> {
        let label = self.label_block().range();
        let mut out = Vec::new();
        if label.start > 0 {
            out.push(0..label.start);
        }
        if label.end < self.n_dim {
            out.push(label.end..self.n_dim);
        }
        out
    }

    pub fn feature_width(&self) -> usize {
        self.n_dim - self.label_block().width
    }
}

/// Row-major encoded matrix plus its block map.
#[derive(Clone, Debug, PartialEq)]
pub struct EncodedMatrix {
    pub data: Vec<f64>,
    pub rows: usize,
    pub layout: BlockLayout,
}

impl EncodedMatrix {
    pub fn width(&self) -> usize {
        self.layout.n_dim
    }

    pub fn row(&self, r: usize) -> &[f64] {
        let w = self.width();
        &self.data[r * w..(r + 1) * w]
    }

    pub fn to_tensor<T: Scalar>(&self) -> Tensor<T> {
        Tensor::from_f64(self.rows, self.width(), &self.data).expect("consistent buffer")
    }

    pub fn from_tensor<T: Scalar>(t: &Tensor<T>, layout: &BlockLayout) -> Result<Self, DataError> {
        if t.cols() != layout.n_dim {
            return Err(DataError::WidthMismatch {
                expected: layout.n_dim,
                found: t.cols(),
            });
        }
        Ok(Self {
            data: t.to_f64_vec(),
            rows: t.rows(),
            layout: layout.clone(),
        })
    }

    /// Argmax of a categorical block equals `index`.
    fn block_hits(&self, block: &Block, index: usize) -> Vec<bool> {
        (0..self.rows)
            .map(|r| {
                let cells = &self.row(r)[block.range()];
                crate::autodiff::argmax(cells) == index
            })
            .collect()
    }

    pub fn label_bits(&self) -> Vec<bool> {
        self.block_hits(self.layout.label_block(), self.layout.positive_index)
    }

    pub fn privileged_bits(&self) -> Vec<bool> {
        self.block_hits(self.layout.protected_block(), self.layout.privileged_index)
    }

    /// Row-major features with the label block removed.
    pub fn features(&self) -> Vec<f64> {
        let ranges = self.layout.feature_ranges();
        let mut out = Vec::with_capacity(self.rows * self.layout.feature_width());
        for r in 0..self.rows {
            let row = self.row(r);
            for range in &ranges {
                out.extend_from_slice(&row[range.clone()]);
            }
        }
        out
    }
}

/// Fitted encoder for one schema.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Transformer {
    pub columns: Vec<ColumnCodec>,
    pub layout: BlockLayout,
}

impl Transformer {
    pub fn fit(table: &RawTable, schema: &Schema) -> Result<Self, DataError> {
        if table.is_empty() {
            return Err(DataError::EmptyTable);
        }
        if table.header != schema.names() {
            return Err(DataError::HeaderMismatch {
                expected: schema.names().iter().map(|s| s.to_string()).collect(),
                found: table.header.clone(),
            });
        }
        let mut columns = Vec::with_capacity(schema.columns.len());
        for (idx, spec) in schema.columns.iter().enumerate() {
            let encoding = match spec.kind {
                ColumnKind::Continuous => Encoding::Continuous(fit_continuous(table, idx)?),
                ColumnKind::Categorical => {
                    let mut categories: Vec<String> = Vec::new();
                    for c in table.categories(idx)? {
                        if !categories.iter().any(|k| k == c) {
                            categories.push(c.to_string());
                        }
                    }
                    if spec.role != Role::Feature && categories.len() != 2 {
                        return Err(DataError::DegenerateColumn {
                            column: spec.name.clone(),
                            categories: categories.len(),
                        });
                    }
                    Encoding::Categorical { categories }
                }
            };
            columns.push(ColumnCodec {
                name: spec.name.clone(),
                role: spec.role,
                encoding,
            });
        }
        let layout = build_layout(&columns, schema)?;
        Ok(Self { columns, layout })
    }

    pub fn n_dim(&self) -> usize {
        self.layout.n_dim
    }

    pub fn header(&self) -> Vec<String> {
        self.columns.iter().map(|c| c.name.clone()).collect()
    }

    pub fn transform(&self, table: &RawTable) -> Result<EncodedMatrix, DataError> {
        if table.header != self.header() {
            return Err(DataError::HeaderMismatch {
                expected: self.header(),
                found: table.header.clone(),
            });
        }
        let width = self.layout.n_dim;
        let mut data = vec![0.0; table.len() * width];
        for (r, row) in table.rows.iter().enumerate() {
            let out = &mut data[r * width..(r + 1) * width];
            for (c, codec) in self.columns.iter().enumerate() {
                let block = &self.layout.blocks[c];
                match (&codec.encoding, &row[c]) {
                    (Encoding::Continuous(p), Cell::Real(x)) => out[block.start] = p.encode(*x),
                    (Encoding::Categorical { categories }, Cell::Category(v)) => {
                        let k = categories.iter().position(|k| k == v).ok_or_else(|| {
                            DataError::UnseenCategory {
                                column: codec.name.clone(),
                                value: v.clone(),
                            }
                        })?;
                        out[block.start + k] = 1.0;
                    }
                    (Encoding::Continuous(_), _) => {
                        return Err(DataError::CellType {
                            column: codec.name.clone(),
                            row: r,
                            expected: "real",
                        })
                    }
                    (Encoding::Categorical { .. }, _) => {
                        return Err(DataError::CellType {
                            column: codec.name.clone(),
                            row: r,
                            expected: "category",
                        })
                    }
                }
            }
        }
        Ok(EncodedMatrix {
            data,
            rows: table.len(),
            layout: self.layout.clone(),
        })
    }

    /// Undoes both affine maps on continuous cells and decodes each
    /// categorical block by argmax.
    pub fn inverse_transform(&self, m: &EncodedMatrix) -> Result<RawTable, DataError> {
        if m.width() != self.layout.n_dim || m.data.len() != m.rows * self.layout.n_dim {
            return Err(DataError::WidthMismatch {
                expected: self.layout.n_dim,
                found: m.width(),
            });
        }
        let mut rows = Vec::with_capacity(m.rows);
        for r in 0..m.rows {
            let encoded = m.row(r);
            let row = self
                .columns
                .iter()
                .zip(&self.layout.blocks)
                .map(|(codec, block)| match &codec.encoding {
                    Encoding::Continuous(p) => Cell::Real(p.decode(encoded[block.start])),
                    Encoding::Categorical { categories } => {
                        let k = crate::autodiff::argmax(&encoded[block.range()]);
                        Cell::Category(categories[k].clone())
                    }
                })
                .collect();
            rows.push(row);
        }
        Ok(RawTable {
            header: self.header(),
            rows,
        })
    }
}

fn fit_continuous(table: &RawTable, idx: usize) -> Result<ContinuousCodec, DataError> {
    let values: Vec<f64> = table
        .rows
        .iter()
        .enumerate()
        .map(|(r, row)| {
            row[idx].as_real().ok_or_else(|| DataError::CellType {
                column: table.header[idx].clone(),
                row: r,
                expected: "real",
            })
        })
        .collect::<Result<_, _>>()?;
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    let std = var.sqrt();
    if !(std > 0.0) {
        return Err(DataError::ZeroVariance(table.header[idx].clone()));
    }
    let (lo, hi) = values.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
        (lo.min(v), hi.max(v))
    });
    let post_min = (lo - mean) / std;
    let post_range = (hi - mean) / std - post_min;
    Ok(ContinuousCodec {
        mean,
        std,
        post_min,
        post_range,
    })
}

fn build_layout(columns: &[ColumnCodec], schema: &Schema) -> Result<BlockLayout, DataError> {
    let n_num = columns
        .iter()
        .filter(|c| matches!(c.encoding, Encoding::Continuous(_)))
        .count();
    let mut blocks = Vec::with_capacity(columns.len());
    let (mut num_pos, mut cat_pos) = (0, n_num);
    for (idx, c) in columns.iter().enumerate() {
        match &c.encoding {
            Encoding::Continuous(_) => {
                blocks.push(Block {
                    column: idx,
                    kind: ColumnKind::Continuous,
                    start: num_pos,
                    width: 1,
                });
                num_pos += 1;
            }
            Encoding::Categorical { categories } => {
                blocks.push(Block {
                    column: idx,
                    kind: ColumnKind::Categorical,
                    start: cat_pos,
                    width: categories.len(),
                });
                cat_pos += categories.len();
            }
        }
    }
    let find = |col: usize, value: &str| -> Result<usize, DataError> {
        match &columns[col].encoding {
            Encoding::Categorical { categories } => categories
                .iter()
                .position(|k| k == value)
                .ok_or_else(|| DataError::UnseenCategory {
                    column: columns[col].name.clone(),
                    value: value.to_string(),
                }),
            Encoding::Continuous(_) => unreachable!("validated schema"),
        }
    };
    let label_column = schema.label_index();
    let protected_column = schema.protected_index();
    Ok(BlockLayout {
        positive_index: find(label_column, &schema.positive_label)?,
        privileged_index: find(protected_column, &schema.privileged_value)?,
        blocks,
        n_num,
        n_dim: cat_pos,
        label_column,
        protected_column,
    })
}
