use std::io::Write;

use super::harness::{EvaluationReport, Evaluator};
use super::EvalError;
use crate::metrics::{roc_curve, METRIC_NAMES};

fn csv_err(e: impl std::fmt::Display) -> EvalError {
    EvalError::Io(e.to_string())
}

/// `Method,SP` with one row per source.
pub fn write_dataset_sp<W: Write>(report: &EvaluationReport, out: W) -> Result<(), EvalError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["Method", "SP"]).map_err(csv_err)?;
    for s in &report.sources {
        w.write_record([s.method.clone(), s.dataset_sp.fmt4()]).map_err(csv_err)?;
    }
    w.flush().map_err(csv_err)
}

/// One row per classifier and method with the fold-mean metrics.
pub fn write_metrics_table<W: Write>(report: &EvaluationReport, out: W) -> Result<(), EvalError> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["Classifier", "Method"];
    header.extend(METRIC_NAMES);
    w.write_record(&header).map_err(csv_err)?;
    for kind in &report.settings.kinds {
        for s in &report.sources {
            let r = s.results.iter().find(|r| r.classifier == *kind).expect("every source runs every kind");
            let mut rec = vec![kind.name().to_string(), s.method.clone()];
            rec.extend(r.mean.csv_fields());
            w.write_record(&rec).map_err(csv_err)?;
        }
    }
    w.flush().map_err(csv_err)
}

/// Per-group ROC vertices for every method, classifier and fold.
pub fn write_roc_points<W: Write>(report: &EvaluationReport, ev: &Evaluator, out: W) -> Result<(), EvalError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["Method", "Classifier", "Fold", "Group", "FPR", "TPR"]).map_err(csv_err)?;
    for s in &report.sources {
        for r in &s.results {
            for f in &r.folds {
                let gp = ev.grouped(f.fold, f.predictions.clone(), f.scores.clone())?;
                for (group, flag) in [("privileged", true), ("unprivileged", false)] {
                    let (sc, y): (Vec<f64>, Vec<bool>) = (0..gp.len())
                        .filter(|&i| gp.privileged[i] == flag)
                        .map(|i| (gp.score[i], gp.y_true[i]))
                        .unzip();
                    for (fpr, tpr) in roc_curve(&sc, &y).unwrap_or_default() {
                        w.write_record([
                            s.method.clone(),
                            r.classifier.name().to_string(),
                            f.fold.to_string(),
                            group.to_string(),
                            format!("{fpr:.6}"),
                            format!("{tpr:.6}"),
                        ])
                        .map_err(csv_err)?;
                    }
                }
            }
        }
    }
    w.flush().map_err(csv_err)
}

pub fn write_report_json<W: Write>(report: &EvaluationReport, mut out: W) -> Result<(), EvalError> {
    serde_json::to_writer_pretty(&mut out, report).map_err(csv_err)?;
    out.write_all(b"\n").map_err(csv_err)
}
