use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::folds::{kfold_split, FoldPlan, DEFAULT_FOLDS};
use super::models::{fit_predict, ClassifierKind, FeatureMatrix, ModelParams};
use super::EvalError;
use crate::data::{label_bits, RawTable, Schema, Transformer};
use crate::metrics::{statistical_parity, GroupedPredictions, Metric, MetricsRow, METRIC_NAMES};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvalSettings {
    pub kinds: Vec<ClassifierKind>,
    pub params: ModelParams,
    pub folds: usize,
    pub seed: u64,
}

impl Default for EvalSettings {
    fn default() -> Self {
        Self {
            kinds: ClassifierKind::ALL.to_vec(),
            params: ModelParams::default(),
            folds: DEFAULT_FOLDS,
            seed: 42,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FoldOutcome {
    pub fold: usize,
    pub metrics: MetricsRow,
    #[serde(skip)]
    pub predictions: Vec<bool>,
    #[serde(skip)]
    pub scores: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KindSummary {
    pub classifier: ClassifierKind,
    /// Fold mean; undefined when any fold is undefined.
    pub mean: MetricsRow,
    /// Mean over the defined folds only.
    pub defined_mean: MetricsRow,
    pub defined_folds: BTreeMap<String, usize>,
    pub folds: Vec<FoldOutcome>,
}

impl KindSummary {
    fn from_folds(classifier: ClassifierKind, folds: Vec<FoldOutcome>) -> Self {
        let mut mean = [Metric::Undefined; 9];
        let mut defined_mean = [Metric::Undefined; 9];
        let mut defined_folds = BTreeMap::new();
        for (m, name) in METRIC_NAMES.iter().enumerate() {
            let vals: Vec<f64> = folds.iter().filter_map(|f| f.metrics.values()[m].value()).collect();
            if !vals.is_empty() {
                let avg = vals.iter().sum::<f64>() / vals.len() as f64;
                defined_mean[m] = Metric::Value(avg);
                if vals.len() == folds.len() {
                    mean[m] = Metric::Value(avg);
                }
            }
            defined_folds.insert(name.to_string(), vals.len());
        }
        Self {
            classifier,
            mean: MetricsRow::from_values(mean),
            defined_mean: MetricsRow::from_values(defined_mean),
            defined_folds,
            folds,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SourceReport {
    pub method: String,
    /// Positive-label rate gap of the training source itself.
    pub dataset_sp: Metric,
    pub rows: usize,
    pub results: Vec<KindSummary>,
}

/// Real data encoded once, with its fold plan.
pub struct Evaluator {
    pub schema: Schema,
    pub transformer: Transformer,
    pub real: RawTable,
    pub features: FeatureMatrix,
    pub labels: Vec<bool>,
    pub privileged: Vec<bool>,
    pub plan: FoldPlan,
    pub settings: EvalSettings,
}

fn encode(t: &Transformer, table: &RawTable) -> Result<(FeatureMatrix, Vec<bool>, Vec<bool>), EvalError> {
    let m = t.transform(table)?;
    let x = FeatureMatrix::new(m.rows, m.layout.feature_width(), m.features())?;
    Ok((x, m.label_bits(), m.privileged_bits()))
}

fn job_seed(seed: u64, kind: ClassifierKind, fold: usize) -> u64 {
    let mut z = seed ^ ((kind as u64) << 32 | fold as u64);
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl Evaluator {
    /// Fits the encoder on the full real table and draws the fold plan.
    pub fn new(real: RawTable, schema: Schema, settings: EvalSettings) -> Result<Self, EvalError> {
        settings.params.validate()?;
        if settings.kinds.is_empty() {
            return Err(EvalError::InvalidConfig("no classifiers selected".into()));
        }
        let transformer = Transformer::fit(&real, &schema)?;
        let (features, labels, privileged) = encode(&transformer, &real)?;
        let plan = kfold_split(&labels, settings.folds, settings.seed)?;
        Ok(Self {
            schema,
            transformer,
            real,
            features,
            labels,
            privileged,
            plan,
            settings,
        })
    }

    /// Original mode when `synthetic` is `None`; otherwise every fold trains
    /// on the whole synthetic table and tests on the real test fold.
    pub fn evaluate(&self, method: &str, synthetic: Option<&RawTable>) -> Result<SourceReport, EvalError> {
        let synth = match synthetic {
            Some(t) => {
                if t.header != self.real.header {
                    return Err(EvalError::SchemaMismatch {
                        expected: self.real.header.clone(),
                        found: t.header.clone(),
                    });
                }
                Some(encode(&self.transformer, t)?)
            }
            None => None,
        };
        let dataset_sp = match (&synth, synthetic) {
            (Some((_, y, p)), Some(_)) => statistical_parity(y, p),
            _ => statistical_parity(&self.labels, &self.privileged),
        };
        let jobs: Vec<(ClassifierKind, usize)> = self
            .settings
            .kinds
            .iter()
            .flat_map(|&k| (0..self.plan.k).map(move |f| (k, f)))
            .collect();
        let outcomes: Vec<FoldOutcome> = jobs
            .par_iter()
            .map(|&(kind, fold)| self.run_fold(kind, fold, synth.as_ref().map(|s| (&s.0, &s.1))))
            .collect::<Result<_, _>>()?;
        let mut it = outcomes.into_iter();
        let results = self
            .settings
            .kinds
            .iter()
            .map(|&k| KindSummary::from_folds(k, it.by_ref().take(self.plan.k).collect()))
            .collect();
        Ok(SourceReport {
            method: method.to_string(),
            dataset_sp,
            rows: synthetic.map_or(self.real.len(), |t| t.len()),
            results,
        })
    }

    fn run_fold(
        &self,
        kind: ClassifierKind,
        fold: usize,
        synth: Option<(&FeatureMatrix, &Vec<bool>)>,
    ) -> Result<FoldOutcome, EvalError> {
        let test = &self.plan.test[fold];
        let test_x = self.features.select(test);
        let seed = job_seed(self.settings.seed, kind, fold);
        let (predictions, scores) = match synth {
            Some((x, y)) => fit_predict(kind, &self.settings.params, x, y, &test_x, seed)?,
            None => {
                let train = self.plan.train(fold);
                let y: Vec<bool> = train.iter().map(|&i| self.labels[i]).collect();
                fit_predict(kind, &self.settings.params, &self.features.select(&train), &y, &test_x, seed)?
            }
        };
        let gp = self.grouped(fold, predictions.clone(), scores.clone())?;
        Ok(FoldOutcome {
            fold,
            metrics: MetricsRow::compute(&gp),
            predictions,
            scores,
        })
    }

    /// Test-fold truth paired with stored predictions.
    pub fn grouped(&self, fold: usize, predictions: Vec<bool>, scores: Vec<f64>) -> Result<GroupedPredictions, EvalError> {
        let test = &self.plan.test[fold];
        Ok(GroupedPredictions::new(
            test.iter().map(|&i| self.labels[i]).collect(),
            predictions,
            scores,
            test.iter().map(|&i| self.privileged[i]).collect(),
        )?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub dataset: String,
    pub protected: String,
    pub privileged_value: String,
    pub settings: EvalSettings,
    pub plan: FoldPlan,
    pub sources: Vec<SourceReport>,
}

/// Original data first, then each named synthetic table.
pub fn benchmark(
    dataset: &str,
    real: RawTable,
    schema: Schema,
    synthetic: &[(String, RawTable)],
    settings: EvalSettings,
) -> Result<(EvaluationReport, Evaluator), EvalError> {
    for (name, t) in synthetic {
        label_bits(t, &schema).map_err(|e| EvalError::InvalidConfig(format!("{name}: {e}")))?;
    }
    let ev = Evaluator::new(real, schema, settings)?;
    let mut sources = vec![ev.evaluate("Original", None)?];
    for (name, t) in synthetic {
        sources.push(ev.evaluate(name, Some(t))?);
    }
    let protected = ev.schema.columns[ev.schema.protected_index()].name.clone();
    Ok((
        EvaluationReport {
            dataset: dataset.to_string(),
            protected,
            privileged_value: ev.schema.privileged_value.clone(),
            settings: ev.settings.clone(),
            plan: ev.plan.clone(),
            sources,
        },
        ev,
    ))
}
