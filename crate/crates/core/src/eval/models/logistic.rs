use serde::{Deserialize, Serialize};

use super::FeatureMatrix;
use crate::eval::EvalError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LogisticConfig {
    /// Inverse regularization strength; the penalty is `‖w‖² / (2 C n)`.
    pub c: f64,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for LogisticConfig {
    fn default() -> Self {
        Self {
            c: 1.0,
            tol: 1e-6,
            max_iter: 10_000,
        }
    }
}

impl LogisticConfig {
    pub fn validate(&self) -> Result<(), EvalError> {
        if !(self.c > 0.0 && self.c.is_finite()) || !(self.tol > 0.0) || self.max_iter == 0 {
            return Err(EvalError::InvalidConfig(format!("bad logistic settings {self:?}")));
        }
        Ok(())
    }
}

/// L2-regularized logistic regression fit by full-batch gradient descent.
#[derive(Clone, Debug)]
pub struct Logistic {
    pub weights: Vec<f64>,
    pub bias: f64,
    pub iterations: usize,
    pub grad_norm: f64,
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// Largest eigenvalue of `[X 1]ᵀ[X 1] / n` by power iteration.
fn gram_norm(x: &FeatureMatrix) -> f64 {
    let d = x.cols + 1;
    let mut v = vec![1.0 / (d as f64).sqrt(); d];
    let mut lambda = 0.0;
    for _ in 0..100 {
        let mut w = vec![0.0; d];
        for r in 0..x.rows {
            let row = x.row(r);
            let s: f64 = row.iter().zip(&v).map(|(a, b)| a * b).sum::<f64>() + v[d - 1];
            for (wj, a) in w.iter_mut().zip(row) {
                *wj += s * a;
            }
            w[d - 1] += s;
        }
        let norm = w.iter().map(|a| a * a).sum::<f64>().sqrt();
        if norm == 0.0 {
            return 0.0;
        }
        lambda = norm / x.rows as f64;
        v = w.into_iter().map(|a| a / norm).collect();
    }
    lambda
}

/// Mean log-loss plus the ridge term at `theta = [w, b]`; fills `grad`.
fn objective(x: &FeatureMatrix, y: &[bool], theta: &[f64], reg: f64, grad: &mut [f64]) -> f64 {
    let d = x.cols;
    let n = x.rows as f64;
    grad.iter_mut().for_each(|g| *g = 0.0);
    let mut loss = 0.0;
    for r in 0..x.rows {
        let row = x.row(r);
        let z = row.iter().zip(theta).map(|(a, b)| a * b).sum::<f64>() + theta[d];
        // log(1 + e^z) − y z, evaluated stably
        loss += z.max(0.0) + (-z.abs()).exp().ln_1p() - if y[r] { z } else { 0.0 };
        let e = sigmoid(z) - f64::from(u8::from(y[r]));
        for (g, a) in grad.iter_mut().zip(row) {
            *g += e * a;
        }
        grad[d] += e;
    }
    let mut ridge = 0.0;
    for j in 0..=d {
        grad[j] /= n;
        if j < d {
            grad[j] += reg * theta[j];
            ridge += theta[j] * theta[j];
        }
    }
    loss / n + 0.5 * reg * ridge
}

impl Logistic {
    /// Nesterov-accelerated gradient descent with function-value restart.
    pub fn fit(x: &FeatureMatrix, y: &[bool], cfg: &LogisticConfig) -> Self {
        let n = x.rows as f64;
        let reg = 1.0 / (cfg.c * n);
        let step = 1.0 / (0.25 * gram_norm(x) * 1.1 + reg);
        let d = x.cols + 1;
        let mut theta = vec![0.0; d];
        let mut look = theta.clone();
        let mut momentum = 1.0f64;
        let mut prev_loss = f64::INFINITY;
        let mut grad = vec![0.0; d];
        let mut norm = f64::INFINITY;
        let mut it = 0;
        while it < cfg.max_iter {
            let loss = objective(x, y, &look, reg, &mut grad);
            if loss > prev_loss {
                // restart from the last iterate without momentum
                look.clone_from(&theta);
                momentum = 1.0;
                prev_loss = f64::INFINITY;
                continue;
            }
            prev_loss = loss;
            norm = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
            if norm < cfg.tol {
                theta.clone_from(&look);
                break;
            }
            let next: Vec<f64> = look.iter().zip(&grad).map(|(t, g)| t - step * g).collect();
            let m_next = 0.5 * (1.0 + (1.0 + 4.0 * momentum * momentum).sqrt());
            let beta = (momentum - 1.0) / m_next;
            look = next.iter().zip(&theta).map(|(a, b)| a + beta * (a - b)).collect();
            theta = next;
            momentum = m_next;
            it += 1;
        }
        let bias = theta.pop().expect("bias slot");
        Self {
            weights: theta,
            bias,
            iterations: it,
            grad_norm: norm,
        }
    }

    pub fn scores(&self, x: &FeatureMatrix) -> Vec<f64> {
        (0..x.rows)
            .map(|r| {
                let z = x.row(r).iter().zip(&self.weights).map(|(a, b)| a * b).sum::<f64>();
                sigmoid(z + self.bias)
            })
            .collect()
    }
}
