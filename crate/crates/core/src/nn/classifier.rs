use std::ops::Range;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::autodiff::{gumbel_softmax, AdamConfig, AdamState, DenseVars, Graph, GumbelNoise, Tensor, Var};
use crate::data::BlockLayout;
use crate::scalar::Scalar;

use super::linear::{dense, push_vars, Linear};
use super::{NnError, GUMBEL_TAU};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ClassifierConfig {
    pub hidden: Vec<usize>,
    pub lr: f64,
    pub epochs: usize,
    pub batch_size: usize,
}

impl Default for ClassifierConfig {
    fn default() -> Self {
        Self {
            hidden: vec![128, 64],
            lr: 1e-3,
            epochs: 50,
            batch_size: 256,
        }
    }
}

impl ClassifierConfig {
    pub fn validate(&self) -> Result<(), NnError> {
        if self.hidden.iter().any(|&h| h == 0) {
            return Err(NnError::InvalidConfig("classifier hidden sizes must be positive".into()));
        }
        if !(self.lr > 0.0 && self.lr.is_finite()) {
            return Err(NnError::InvalidConfig("classifier lr must be positive".into()));
        }
        if self.batch_size == 0 {
            return Err(NnError::InvalidConfig("classifier batch_size must be positive".into()));
        }
        Ok(())
    }
}

/// ReLU MLP with two output logits; logit 1 is the positive class.
#[derive(Clone, Debug, PartialEq)]
pub struct Classifier<T> {
    pub hidden: Vec<Linear<T>>,
    pub output: Linear<T>,
}

#[derive(Clone, Debug)]
pub struct ClassifierVars {
    pub hidden: Vec<DenseVars>,
    pub output: DenseVars,
}

impl ClassifierVars {
    pub fn vars(&self) -> Vec<Var> {
        let mut out = Vec::new();
        for d in &self.hidden {
            push_vars(&mut out, *d);
        }
        push_vars(&mut out, self.output);
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClassifierReport {
    /// Mean cross-entropy of each epoch.
    pub epoch_losses: Vec<f64>,
    pub train_accuracy: f64,
}

impl<T: Scalar> Classifier<T> {
    pub fn new<R: Rng + ?Sized>(d_in: usize, hidden: &[usize], rng: &mut R) -> Self {
        let mut layers = Vec::with_capacity(hidden.len());
        let mut fan_in = d_in;
        for &h in hidden {
            layers.push(Linear::init(fan_in, h, rng));
            fan_in = h;
        }
        Self {
            hidden: layers,
            output: Linear::init(fan_in, 2, rng),
        }
    }

    pub fn input_dim(&self) -> usize {
        self.hidden.first().unwrap_or(&self.output).fan_in()
    }

    pub fn bind(&self, g: &mut Graph<T>, trainable: bool) -> ClassifierVars {
        ClassifierVars {
            hidden: self.hidden.iter().map(|l| l.bind(g, trainable)).collect(),
            output: self.output.bind(g, trainable),
        }
    }

    pub fn logits(&self, g: &mut Graph<T>, vars: &ClassifierVars, x: Var) -> Result<Var, NnError> {
        let [_, width] = g.shape(x);
        if width != self.input_dim() {
            return Err(NnError::WidthMismatch {
                expected: self.input_dim(),
                found: width,
            });
        }
        let mut h = x;
        for layer in &vars.hidden {
            let pre = dense(g, h, *layer)?;
            h = g.relu(pre)?;
        }
        Ok(dense(g, h, vars.output)?)
    }

    /// Positive-class component of the soft Gumbel-softmax over the logits,
    /// shape `[m, 1]`.
    pub fn soft_label<N: GumbelNoise<T> + ?Sized>(
        &self,
        g: &mut Graph<T>,
        vars: &ClassifierVars,
        x: Var,
        noise: &mut N,
    ) -> Result<Var, NnError> {
        let logits = self.logits(g, vars, x)?;
        let soft = gumbel_softmax(g, logits, T::from_f64_lossy(GUMBEL_TAU), noise, false)?;
        Ok(g.slice_cols(soft, 1, 2)?)
    }

    /// Mean cross-entropy against `labels` (`true` = positive).
    pub fn loss(&self, g: &mut Graph<T>, vars: &ClassifierVars, x: Var, labels: &[bool]) -> Result<Var, NnError> {
        let logits = self.logits(g, vars, x)?;
        let log_p = g.log_softmax(logits)?;
        let target = g.constant(one_hot_labels(labels));
        let picked = g.mul(log_p, target)?;
        let total = g.sum(picked)?;
        Ok(g.scale(total, -T::one() / T::from_usize(labels.len()).expect("row count"))?)
    }

    /// Softmax probability of the positive class for each row.
    pub fn predict_proba(&self, x: &Tensor<T>) -> Result<Vec<f64>, NnError> {
        let mut g = Graph::new();
        let vars = self.bind(&mut g, false);
        let x = g.constant(x.clone());
        let logits = self.logits(&mut g, &vars, x)?;
        let p = g.softmax(logits)?;
        let p = g.value(p);
        Ok((0..p.rows()).map(|r| p.get(r, 1).to_f64_lossy()).collect())
    }

    pub fn params(&self) -> Vec<&Tensor<T>> {
        let mut out = Vec::new();
        for l in self.hidden.iter().chain(std::iter::once(&self.output)) {
            out.extend([&l.weight, &l.bias]);
        }
        out
    }

    pub fn params_mut(&mut self) -> Vec<&mut Tensor<T>> {
        let mut out = Vec::new();
        for l in self.hidden.iter_mut().chain(std::iter::once(&mut self.output)) {
            out.extend([&mut l.weight, &mut l.bias]);
        }
        out
    }

    pub fn cast<U: Scalar>(&self) -> Classifier<U> {
        Classifier {
            hidden: self.hidden.iter().map(Linear::cast).collect(),
            output: self.output.cast(),
        }
    }
}

fn one_hot_labels<T: Scalar>(labels: &[bool]) -> Tensor<T> {
    Tensor::from_fn(labels.len(), 2, |r, c| {
        if (c == 1) == labels[r] {
            T::one()
        } else {
            T::zero()
        }
    })
}

/// Encoded rows with the label block removed, as a graph node.
pub fn classifier_input<T: Scalar>(g: &mut Graph<T>, x: Var, layout: &BlockLayout) -> Result<Var, NnError> {
    let ranges: Vec<Range<usize>> = layout.feature_ranges();
    let parts = ranges
        .iter()
        .map(|r| g.slice_cols(x, r.start, r.end))
        .collect::<Result<Vec<_>, _>>()?;
    if parts.len() == 1 {
        return Ok(parts[0]);
    }
    Ok(g.concat(&parts)?)
}

/// Minibatch Adam on cross-entropy over `features` (`n × d_in`).
pub fn train_classifier<T: Scalar, R: Rng + ?Sized>(
    features: &Tensor<T>,
    labels: &[bool],
    config: &ClassifierConfig,
    rng: &mut R,
) -> Result<(Classifier<T>, ClassifierReport), NnError> {
    config.validate()?;
    let n = features.rows();
    if labels.len() != n {
        return Err(NnError::LabelCount {
            rows: n,
            labels: labels.len(),
        });
    }
    let positives = labels.iter().filter(|&&b| b).count();
    if positives == 0 || positives == n {
        return Err(NnError::SingleClass);
    }
    let mut model = Classifier::new(features.cols(), &config.hidden, rng);
    let mut adam = AdamState::for_params(AdamConfig::standard(config.lr), &model.params());
    let mut order: Vec<usize> = (0..n).collect();
    let mut epoch_losses = Vec::with_capacity(config.epochs);
    for _ in 0..config.epochs {
        order.shuffle(rng);
        let mut total = 0.0;
        for batch in order.chunks(config.batch_size) {
            let x = features.gather_rows(batch);
            let y: Vec<bool> = batch.iter().map(|&i| labels[i]).collect();
            let mut g = Graph::new();
            let vars = model.bind(&mut g, true);
            let x = g.constant(x);
            let loss = model.loss(&mut g, &vars, x, &y)?;
            total += g.value(loss).item().to_f64_lossy() * batch.len() as f64;
            let mut grads = g.backward(loss)?;
            let grads: Vec<Tensor<T>> = vars.vars().into_iter().map(|v| grads.take(v)).collect();
            adam.step(&mut model.params_mut(), &grads)?;
        }
        epoch_losses.push(total / n as f64);
    }
    let proba = model.predict_proba(features)?;
    let correct = proba
        .iter()
        .zip(labels)
        .filter(|(p, &y)| (**p >= 0.5) == y)
        .count();
    Ok((
        model,
        ClassifierReport {
            epoch_losses,
            train_accuracy: correct as f64 / n as f64,
        },
    ))
}
