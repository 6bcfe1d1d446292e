//! Group fairness and utility metrics with explicit undefined values.

mod confusion;
mod roc;
mod value;

pub use confusion::{
    confusion_by_group, rate_metrics, statistical_parity, utility, Confusion, ConfusionByGroup,
    GroupedPredictions, RateMetrics,
};
pub use roc::{abroca, between_curve_area, roc_curve};
pub use value::{Metric, UNDEFINED_TOKEN};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricsError {
    #[error("no rows to evaluate")]
    Empty,
    #[error("{field} has {found} entries, expected {expected}")]
    LengthMismatch {
        field: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("score {value} at row {row} is outside [0, 1]")]
    ScoreRange { row: usize, value: f64 },
}

pub const METRIC_NAMES: [&str; 9] = ["Acc", "BA", "SP", "EO", "EOd", "PP", "PE", "TE", "ABROCA"];

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub struct MetricsRow {
    #[serde(rename = "Acc")]
    pub acc: Metric,
    pub ba: Metric,
    pub sp: Metric,
    pub eo: Metric,
    #[serde(rename = "EOd")]
    pub eod: Metric,
    pub pp: Metric,
    pub pe: Metric,
    pub te: Metric,
    pub abroca: Metric,
}

impl MetricsRow {
    pub fn compute(gp: &GroupedPredictions) -> Self {
        let c = confusion_by_group(gp);
        let r = rate_metrics(&c);
        let (acc, ba) = utility(&c);
        Self {
            acc,
            ba,
            sp: statistical_parity(&gp.y_pred, &gp.privileged),
            eo: r.eo,
            eod: r.eod,
            pp: r.pp,
            pe: r.pe,
            te: r.te,
            abroca: abroca(&gp.score, &gp.y_true, &gp.privileged),
        }
    }

    /// Values in `METRIC_NAMES` order.
    pub fn values(&self) -> [Metric; 9] {
        [
            self.acc, self.ba, self.sp, self.eo, self.eod, self.pp, self.pe, self.te, self.abroca,
        ]
    }

    pub fn from_values(v: [Metric; 9]) -> Self {
        let [acc, ba, sp, eo, eod, pp, pe, te, abroca] = v;
        Self {
            acc,
            ba,
            sp,
            eo,
            eod,
            pp,
            pe,
            te,
            abroca,
        }
    }

    pub fn csv_fields(&self) -> Vec<String> {
        self.values().iter().map(|m| m.fmt4()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn row_serializes_with_table_names() {
        let mut row = MetricsRow::from_values([Metric::Value(0.5); 9]);
        row.te = Metric::Undefined;
        let v: serde_json::Value = serde_json::to_value(row).unwrap();
        let keys: Vec<&str> = v.as_object().unwrap().keys().map(|k| k.as_str()).collect();
        let mut want = METRIC_NAMES.to_vec();
        want.sort();
        let mut got = keys.clone();
        got.sort();
        assert_eq!(got, want);
        assert_eq!(v["TE"], "nan");
        let back: MetricsRow = serde_json::from_value(v).unwrap();
        assert_eq!(back, row);
        assert_eq!(row.csv_fields()[7], "nan");
    }
}
