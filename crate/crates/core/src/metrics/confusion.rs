use serde::{Deserialize, Serialize};

use super::{Metric, MetricsError};

/// One row set of labels, hard predictions, scores and group membership.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupedPredictions {
    pub y_true: Vec<bool>,
    pub y_pred: Vec<bool>,
    pub score: Vec<f64>,
    pub privileged: Vec<bool>,
}

impl GroupedPredictions {
    pub fn new(
        y_true: Vec<bool>,
        y_pred: Vec<bool>,
        score: Vec<f64>,
        privileged: Vec<bool>,
    ) -> Result<Self, MetricsError> {
        let n = y_true.len();
        if n == 0 {
            return Err(MetricsError::Empty);
        }
        for (name, len) in [
            ("y_pred", y_pred.len()),
            ("score", score.len()),
            ("privileged", privileged.len()),
        ] {
            if len != n {
                return Err(MetricsError::LengthMismatch {
                    field: name,
                    expected: n,
                    found: len,
                });
            }
        }
        if let Some(row) = score.iter().position(|s| !(0.0..=1.0).contains(s)) {
            return Err(MetricsError::ScoreRange {
                row,
                value: score[row],
            });
        }
        Ok(Self {
            y_true,
            y_pred,
            score,
            privileged,
        })
    }

    pub fn len(&self) -> usize {
        self.y_true.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y_true.is_empty()
    }

    /// The same rows with the privileged flag flipped.
    pub fn swap_groups(&self) -> Self {
        Self {
            privileged: self.privileged.iter().map(|p| !p).collect(),
            ..self.clone()
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Confusion {
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
}

impl Confusion {
    pub fn add(&mut self, y: bool, yhat: bool) {
        match (y, yhat) {
            (true, true) => self.tp += 1,
            (true, false) => self.fn_ += 1,
            (false, true) => self.fp += 1,
            (false, false) => self.tn += 1,
        }
    }

    pub fn total(&self) -> usize {
        self.tp + self.fp + self.tn + self.fn_
    }

    pub fn merged(&self, o: &Confusion) -> Confusion {
        Confusion {
            tp: self.tp + o.tp,
            fp: self.fp + o.fp,
            tn: self.tn + o.tn,
            fn_: self.fn_ + o.fn_,
        }
    }

    pub fn tpr(&self) -> Metric {
        Metric::ratio(self.tp as f64, (self.tp + self.fn_) as f64)
    }

    pub fn fpr(&self) -> Metric {
        Metric::ratio(self.fp as f64, (self.fp + self.tn) as f64)
    }

    pub fn tnr(&self) -> Metric {
        Metric::ratio(self.tn as f64, (self.fp + self.tn) as f64)
    }

    pub fn ppv(&self) -> Metric {
        Metric::ratio(self.tp as f64, (self.tp + self.fp) as f64)
    }

    pub fn positive_rate(&self) -> Metric {
        Metric::ratio((self.tp + self.fp) as f64, self.total() as f64)
    }

    pub fn fn_fp_ratio(&self) -> Metric {
        Metric::ratio(self.fn_ as f64, self.fp as f64)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionByGroup {
    pub privileged: Confusion,
    pub unprivileged: Confusion,
}

impl ConfusionByGroup {
    pub fn pooled(&self) -> Confusion {
        self.privileged.merged(&self.unprivileged)
    }
}

pub fn confusion_by_group(gp: &GroupedPredictions) -> ConfusionByGroup {
    let mut c = ConfusionByGroup::default();
    for i in 0..gp.len() {
        let cell = if gp.privileged[i] {
            &mut c.privileged
        } else {
            &mut c.unprivileged
        };
        cell.add(gp.y_true[i], gp.y_pred[i]);
    }
    c
}

/// Signed positive-rate gap, privileged minus unprivileged.
pub fn statistical_parity(positive: &[bool], privileged: &[bool]) -> Metric {
    let mut n = [0usize; 2];
    let mut k = [0usize; 2];
    for (&y, &p) in positive.iter().zip(privileged) {
        let g = usize::from(p);
        n[g] += 1;
        k[g] += usize::from(y);
    }
    Metric::ratio(k[1] as f64, n[1] as f64).zip(Metric::ratio(k[0] as f64, n[0] as f64), |a, b| a - b)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateMetrics {
    pub eo: Metric,
    pub pe: Metric,
    pub eod: Metric,
    pub pp: Metric,
    pub te: Metric,
}

pub fn rate_metrics(c: &ConfusionByGroup) -> RateMetrics {
    let (a, b) = (&c.privileged, &c.unprivileged);
    let gap = |x: Metric, y: Metric| x.zip(y, |x, y| (x - y).abs());
    let eo = gap(a.tpr(), b.tpr());
    let pe = gap(a.fpr(), b.fpr());
    RateMetrics {
        eo,
        pe,
        eod: eo.zip(pe, |x, y| x + y),
        pp: gap(a.ppv(), b.ppv()),
        te: a.fn_fp_ratio().zip(b.fn_fp_ratio(), |x, y| x - y),
    }
}

/// Pooled accuracy and balanced accuracy.
pub fn utility(c: &ConfusionByGroup) -> (Metric, Metric) {
    let all = c.pooled();
    let acc = Metric::ratio((all.tp + all.tn) as f64, all.total() as f64);
    let ba = all.tpr().zip(all.tnr(), |t, n| 0.5 * (t + n));
    (acc, ba)
}
