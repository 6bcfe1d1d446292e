use std::fmt;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::schema::{ColumnKind, Schema};
use super::DataError;

pub const AGE_IN_RANGE: &str = "25-65";
pub const AGE_OTHER: &str = "other";
pub const NON_PRIVILEGED: &str = "other";

/// One table cell: a real number for continuous columns, a category token
/// otherwise.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Cell {
    Real(f64),
    Category(String),
}

impl Cell {
    pub fn as_real(&self) -> Option<f64> {
        match self {
            Cell::Real(v) => Some(*v),
            Cell::Category(_) => None,
        }
    }

    pub fn as_category(&self) -> Option<&str> {
        match self {
            Cell::Category(s) => Some(s),
            Cell::Real(_) => None,
        }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            // `{}` on f64 is the shortest representation that parses back
            // to the same value.
            Cell::Real(v) => write!(f, "{v}"),
            Cell::Category(s) => f.write_str(s),
        }
    }
}

/// Rectangular table of typed cells.
#[derive(Clone, Debug, PartialEq)]
pub struct RawTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

/// Outcome of [`load_csv`].
#[derive(Clone, Debug)]
pub struct LoadedTable {
    pub table: RawTable,
    pub total_rows: usize,
    pub dropped_rows: usize,
}

fn is_missing(cell: &str) -> bool {
    cell.is_empty() || cell == "?"
}

impl RawTable {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn column_index(&self, name: &str) -> Result<usize, DataError> {
        self.header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| DataError::UnknownColumn(name.to_string()))
    }

    pub fn column(&self, idx: usize) -> impl Iterator<Item = &Cell> + '_ {
        self.rows.iter().map(move |r| &r[idx])
    }

    /// Rows selected by index, in the given order.
    pub fn select_rows(&self, indices: &[usize]) -> RawTable {
        RawTable {
            header: self.header.clone(),
            rows: indices.iter().map(|&i| self.rows[i].clone()).collect(),
        }
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), DataError> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        let csv_err = |e: csv::Error| DataError::Csv(e.to_string());
        w.write_record(&self.header).map_err(csv_err)?;
        let mut buf: Vec<String> = Vec::with_capacity(self.header.len());
        for row in &self.rows {
            buf.clear();
            buf.extend(row.iter().map(|c| c.to_string()));
            w.write_record(&buf).map_err(csv_err)?;
        }
        w.flush().map_err(|e| DataError::Csv(e.to_string()))?;
        Ok(())
    }

    pub fn write_csv_path(&self, path: &Path) -> Result<(), DataError> {
        let file = std::fs::File::create(path).map_err(|e| DataError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        self.write_csv(std::io::BufWriter::new(file))
    }

    /// Category tokens of a categorical column.
    pub fn categories(&self, idx: usize) -> Result<Vec<&str>, DataError> {
        self.rows
            .iter()
            .enumerate()
            .map(|(r, row)| {
                row[idx].as_category().ok_or_else(|| DataError::CellType {
                    column: self.header[idx].clone(),
                    row: r,
                    expected: "category",
                })
            })
            .collect()
    }
}

/// Reads a headered CSV, typing cells by the schema and dropping any row
/// with a missing marker (empty cell or `?`).
pub fn load_csv(path: &Path, schema: &Schema) -> Result<LoadedTable, DataError> {
    let file = std::fs::File::open(path).map_err(|e| DataError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    read_csv(std::io::BufReader::new(file), schema)
}

pub fn read_csv<R: Read>(input: R, schema: &Schema) -> Result<LoadedTable, DataError> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(input);
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| DataError::Csv(e.to_string()))?
        .iter()
        .map(str::to_string)
        .collect();
    let expected = schema.names();
    if header != expected {
        return Err(DataError::HeaderMismatch {
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: header,
        });
    }

    let mut rows = Vec::new();
    let mut total = 0;
    let mut dropped = 0;
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| DataError::Csv(e.to_string()))?;
        total += 1;
        if record.iter().any(is_missing) {
            dropped += 1;
            continue;
        }
        let mut row = Vec::with_capacity(header.len());
        for (cell, spec) in record.iter().zip(&schema.columns) {
            row.push(match spec.kind {
                ColumnKind::Continuous => {
                    Cell::Real(cell.parse::<f64>().map_err(|_| DataError::Parse {
                        column: spec.name.clone(),
                        // +2: header line and 1-based numbering
                        line: i + 2,
                        value: cell.to_string(),
                    })?)
                }
                ColumnKind::Categorical => Cell::Category(cell.to_string()),
            });
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(DataError::EmptyTable);
    }
    Ok(LoadedTable {
        table: RawTable { header, rows },
        total_rows: total,
        dropped_rows: dropped,
    })
}

/// Replaces a numeric age column by `"25-65"` (inclusive) or `"other"`.
///
/// Cells already holding one of the two tokens are kept, so the operation
/// is idempotent.
pub fn binarize_age(table: &RawTable, column: &str) -> Result<RawTable, DataError> {
    let idx = table.column_index(column)?;
    let mut out = table.clone();
    for (r, row) in out.rows.iter_mut().enumerate() {
        let age = match &row[idx] {
            Cell::Real(v) => *v,
            Cell::Category(s) if s == AGE_IN_RANGE || s == AGE_OTHER => continue,
            Cell::Category(s) => s.parse::<f64>().map_err(|_| DataError::Parse {
                column: column.to_string(),
                line: r + 2,
                value: s.clone(),
            })?,
        };
        let bucket = if (25.0..=65.0).contains(&age) {
            AGE_IN_RANGE
        } else {
            AGE_OTHER
        };
        row[idx] = Cell::Category(bucket.to_string());
    }
    Ok(out)
}

/// Collapses a protected column to `{privileged, "other"}`.
pub fn binarize_protected(
    table: &RawTable,
    column: &str,
    privileged: &str,
) -> Result<RawTable, DataError> {
    let idx = table.column_index(column)?;
    let mut out = table.clone();
    for row in out.rows.iter_mut() {
        if let Cell::Category(s) = &row[idx] {
            if s != privileged {
                row[idx] = Cell::Category(NON_PRIVILEGED.to_string());
            }
        }
    }
    Ok(out)
}

/// Applies every binarization the schema asks for.
pub fn preprocess(table: &RawTable, schema: &Schema) -> Result<RawTable, DataError> {
    let mut t = table.clone();
    for name in &schema.age_binarize {
        t = binarize_age(&t, name)?;
    }
    for name in &schema.protected_binarize {
        t = binarize_protected(&t, name, &schema.privileged_value)?;
    }
    Ok(t)
}

/// `load_csv` followed by [`preprocess`].
pub fn load_prepared(path: &Path, schema: &Schema) -> Result<LoadedTable, DataError> {
    let mut loaded = load_csv(path, schema)?;
    loaded.table = preprocess(&loaded.table, schema)?;
    Ok(loaded)
}

/// Positive-to-negative class ratio with the smaller side scaled to 1.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ImbalanceRatio {
    pub positive: f64,
    pub negative: f64,
    pub positive_count: usize,
    pub negative_count: usize,
}

impl fmt::Display for ImbalanceRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = |v: f64| {
            if v == 1.0 {
                "1".to_string()
            } else {
                format!("{v:.2}")
            }
        };
        write!(f, "{}:{}", side(self.positive), side(self.negative))
    }
}

pub fn imbalance_ratio(table: &RawTable, schema: &Schema) -> Result<ImbalanceRatio, DataError> {
    let label = &schema.columns[schema.label_index()].name;
    let idx = table.column_index(label)?;
    let cats = table.categories(idx)?;
    let pos = cats.iter().filter(|&&c| c == schema.positive_label).count();
    let neg = cats.len() - pos;
    if pos == 0 || neg == 0 {
        return Err(DataError::DegenerateColumn {
            column: label.clone(),
            categories: if pos == 0 { 0 } else { 1 },
        });
    }
    let (p, n) = (pos as f64, neg as f64);
    let (positive, negative) = if pos <= neg { (1.0, n / p) } else { (p / n, 1.0) };
    Ok(ImbalanceRatio {
        positive,
        negative,
        positive_count: pos,
        negative_count: neg,
    })
}

/// Per-row `label == positive_label`.
pub fn label_bits(table: &RawTable, schema: &Schema) -> Result<Vec<bool>, DataError> {
    let idx = table.column_index(&schema.columns[schema.label_index()].name)?;
    Ok(table
        .categories(idx)?
        .into_iter()
        .map(|c| c == schema.positive_label)
        .collect())
}

/// Per-row `protected == privileged_value`.
pub fn privileged_bits(table: &RawTable, schema: &Schema) -> Result<Vec<bool>, DataError> {
    let idx = table.column_index(&schema.columns[schema.protected_index()].name)?;
    Ok(table
        .categories(idx)?
        .into_iter()
        .map(|c| c == schema.privileged_value)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn schema() -> Schema {
        Schema::from_json_str(
            r#"{"columns": [
                {"name": "age", "kind": "categorical", "role": "protected"},
                {"name": "x", "kind": "continuous", "role": "feature"},
                {"name": "y", "kind": "categorical", "role": "label"}
            ], "privileged_value": "25-65", "positive_label": "1", "age_binarize": ["age"]}"#,
        )
        .unwrap()
    }

    #[test]
    fn clean_file_keeps_every_row() {
        let csv = "age,x,y\n30,1.5,1\n20,2,0\n70,3,1\n";
        let loaded = read_csv(csv.as_bytes(), &schema()).unwrap();
        assert_eq!(loaded.table.len(), 3);
        assert_eq!(loaded.dropped_rows, 0);
        assert_eq!(loaded.table.rows[0][1], Cell::Real(1.5));
    }

    #[test]
    fn missing_marker_drops_row() {
        let csv = "age,x,y\n30,1.5,1\n20,?,0\n70,3,1\n44, ,0\n";
        let loaded = read_csv(csv.as_bytes(), &schema()).unwrap();
        assert_eq!(loaded.total_rows, 4);
        assert_eq!(loaded.table.len(), 2);
        assert_eq!(loaded.dropped_rows, 2);
        let csv = "age,x,y\n30,1.5,1\n20,?,0\n70,3,1\n44,2,0\n";
        let loaded = read_csv(csv.as_bytes(), &schema()).unwrap();
        assert_eq!((loaded.table.len(), loaded.dropped_rows), (3, 1));
    }

    #[test]
    fn header_mismatch_is_an_error() {
        let csv = "age,z,y\n30,1.5,1\n";
        assert!(matches!(
            read_csv(csv.as_bytes(), &schema()),
            Err(DataError::HeaderMismatch { .. })
        ));
    }

    #[test]
    fn unparseable_continuous_cell_reports_line() {
        let csv = "age,x,y\n30,1.5,1\n30,abc,1\n";
        match read_csv(csv.as_bytes(), &schema()) {
            Err(DataError::Parse { line, column, .. }) => {
                assert_eq!(line, 3);
                assert_eq!(column, "x");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn all_rows_missing_is_empty_error() {
        let csv = "age,x,y\n?,1,1\n";
        assert!(matches!(
            read_csv(csv.as_bytes(), &schema()),
            Err(DataError::EmptyTable)
        ));
    }

    #[test]
    fn age_buckets_are_inclusive() {
        let csv = "age,x,y\n25,0,1\n65,0,1\n66,0,0\n24,0,0\n30,0,1\n";
        let t = read_csv(csv.as_bytes(), &schema()).unwrap().table;
        let b = binarize_age(&t, "age").unwrap();
        let got: Vec<_> = b.column(0).map(|c| c.to_string()).collect();
        assert_eq!(got, ["25-65", "25-65", "other", "other", "25-65"]);
        assert_eq!(binarize_age(&b, "age").unwrap(), b);
    }

    #[test]
    fn age_must_be_numeric() {
        let csv = "age,x,y\nold,0,1\n";
        let t = read_csv(csv.as_bytes(), &schema()).unwrap().table;
        assert!(binarize_age(&t, "age").is_err());
    }

    #[test]
    fn balanced_labels_give_unit_ratio() {
        let csv = "age,x,y\n30,0,1\n30,0,1\n30,0,0\n30,0,0\n";
        let t = read_csv(csv.as_bytes(), &schema()).unwrap().table;
        let ir = imbalance_ratio(&t, &schema()).unwrap();
        assert_eq!((ir.positive, ir.negative), (1.0, 1.0));
        assert_eq!(ir.to_string(), "1:1");
    }

    #[test]
    fn majority_positive_ratio_is_left_heavy() {
        let csv = "age,x,y\n30,0,1\n30,0,1\n30,0,1\n30,0,0\n";
        let t = read_csv(csv.as_bytes(), &schema()).unwrap().table;
        assert_eq!(imbalance_ratio(&t, &schema()).unwrap().to_string(), "3.00:1");
    }

    #[test]
    fn csv_write_round_trips_reals() {
        let csv = "age,x,y\n30,0.1,1\n31,123456.789,0\n";
        let t = read_csv(csv.as_bytes(), &schema()).unwrap().table;
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let back = read_csv(buf.as_slice(), &schema()).unwrap().table;
        assert_eq!(back, t);
    }
}
