use rand::Rng;

use crate::scalar::Scalar;

use super::graph::{Graph, Var};
use super::tensor::Tensor;
use super::AutodiffError;

const UNIFORM_CLAMP: f64 = 1e-12;

/// Source of standard Gumbel(0, 1) noise matrices.
pub trait GumbelNoise<T: Scalar> {
    fn gumbel(&mut self, rows: usize, cols: usize) -> Tensor<T>;
}

impl<T: Scalar, R: Rng> GumbelNoise<T> for R {
    fn gumbel(&mut self, rows: usize, cols: usize) -> Tensor<T> {
        Tensor::from_fn(rows, cols, |_, _| T::from_f64_lossy(sample_gumbel(self)))
    }
}

/// `g = −ln(−ln u)` with `u` clamped away from 0 and 1.
pub fn sample_gumbel<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u: f64 = rng.gen::<f64>().clamp(UNIFORM_CLAMP, 1.0 - UNIFORM_CLAMP);
    -(-u.ln()).ln()
}

/// Noise fixed at zero: the softmax becomes deterministic.
#[derive(Clone, Copy, Debug, Default)]
pub struct ZeroNoise;

impl<T: Scalar> GumbelNoise<T> for ZeroNoise {
    fn gumbel(&mut self, rows: usize, cols: usize) -> Tensor<T> {
        Tensor::zeros(rows, cols)
    }
}

/// Wraps a source and keeps a copy of every matrix it hands out.
pub struct RecordingNoise<'a, T, N: ?Sized> {
    inner: &'a mut N,
    pub recorded: Vec<Tensor<T>>,
}

impl<'a, T: Scalar, N: GumbelNoise<T> + ?Sized> RecordingNoise<'a, T, N> {
    pub fn new(inner: &'a mut N) -> Self {
        Self {
            inner,
            recorded: Vec::new(),
        }
    }

    pub fn into_replay(self) -> ReplayNoise<T> {
        ReplayNoise::new(self.recorded)
    }
}

impl<T: Scalar, N: GumbelNoise<T> + ?Sized> GumbelNoise<T> for RecordingNoise<'_, T, N> {
    fn gumbel(&mut self, rows: usize, cols: usize) -> Tensor<T> {
        let t = self.inner.gumbel(rows, cols);
        self.recorded.push(t.clone());
        t
    }
}

/// Replays a recorded sequence, cycling from the start after each pass.
#[derive(Clone, Debug)]
pub struct ReplayNoise<T> {
    tensors: Vec<Tensor<T>>,
    pos: usize,
}

impl<T: Scalar> ReplayNoise<T> {
    pub fn new(tensors: Vec<Tensor<T>>) -> Self {
        Self { tensors, pos: 0 }
    }

    pub fn rewind(&mut self) {
        self.pos = 0;
    }
}

impl<T: Scalar> GumbelNoise<T> for ReplayNoise<T> {
    fn gumbel(&mut self, rows: usize, cols: usize) -> Tensor<T> {
        let t = self.tensors[self.pos % self.tensors.len()].clone();
        self.pos += 1;
        assert_eq!(t.shape(), [rows, cols], "replayed noise shape differs");
        t
    }
}

/// Gumbel-softmax over each row of `logits`: `softmax((logits + g) / tau)`.
///
/// In hard mode the forward value is the row argmax as a one-hot vector
/// while gradients flow through the soft relaxation.
pub fn gumbel_softmax<T: Scalar, N: GumbelNoise<T> + ?Sized>(
    g: &mut Graph<T>,
    logits: Var,
    tau: T,
    noise: &mut N,
    hard: bool,
) -> Result<Var, AutodiffError> {
    if !(tau > T::zero()) {
        return Err(AutodiffError::InvalidTemperature(tau.to_f64_lossy()));
    }
    let [m, n] = g.shape(logits);
    let noise = g.constant(noise.gumbel(m, n));
    let perturbed = g.add(logits, noise)?;
    let scaled = g.scale(perturbed, T::one() / tau)?;
    let soft = g.softmax(scaled)?;
    if !hard {
        return Ok(soft);
    }
    let hard_value = one_hot_argmax(g.value(soft));
    g.straight_through(soft, hard_value)
}

/// One-hot encoding of each row's argmax; ties resolve to the lowest index.
pub fn one_hot_argmax<T: Scalar>(x: &Tensor<T>) -> Tensor<T> {
    let [m, n] = x.shape();
    let mut out = Tensor::zeros(m, n);
    for r in 0..m {
        out.set(r, argmax(x.row(r)), T::one());
    }
    out
}

pub fn argmax<T: Scalar>(row: &[T]) -> usize {
    let mut best = 0;
    for (i, &v) in row.iter().enumerate().skip(1) {
        if v > row[best] {
            best = i;
        }
    }
    best
}
