use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

use super::tensor::Tensor;
use super::AutodiffError;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdamConfig {
    pub lr: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
}

impl AdamConfig {
    /// Betas used for both adversarial players.
    pub fn gan(lr: f64) -> Self {
        Self {
            lr,
            beta1: 0.5,
            beta2: 0.9,
            eps: 1e-8,
        }
    }

    pub fn standard(lr: f64) -> Self {
        Self {
            lr,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
        }
    }
}

/// Adam with bias correction.
#[derive(Clone, Debug)]
pub struct AdamState<T> {
    pub config: AdamConfig,
    first: Vec<Tensor<T>>,
    second: Vec<Tensor<T>>,
    step: u64,
}

impl<T: Scalar> AdamState<T> {
    pub fn new(config: AdamConfig, shapes: &[[usize; 2]]) -> Self {
        Self {
            config,
            first: shapes.iter().map(|&[r, c]| Tensor::zeros(r, c)).collect(),
            second: shapes.iter().map(|&[r, c]| Tensor::zeros(r, c)).collect(),
            step: 0,
        }
    }

    pub fn for_params(config: AdamConfig, params: &[&Tensor<T>]) -> Self {
        let shapes: Vec<_> = params.iter().map(|p| p.shape()).collect();
        Self::new(config, &shapes)
    }

    pub fn step_count(&self) -> u64 {
        self.step
    }

    pub fn set_lr(&mut self, lr: f64) {
        self.config.lr = lr;
    }

    /// Clears both moment estimates and the step counter.
    pub fn reset(&mut self) {
        for m in self.first.iter_mut().chain(self.second.iter_mut()) {
            m.data_mut().iter_mut().for_each(|v| *v = T::zero());
        }
        self.step = 0;
    }

    pub fn step(
        &mut self,
        params: &mut [&mut Tensor<T>],
        grads: &[Tensor<T>],
    ) -> Result<(), AutodiffError> {
        if params.len() != self.first.len() || grads.len() != self.first.len() {
            return Err(AutodiffError::ParamCount {
                expected: self.first.len(),
                actual: params.len().min(grads.len()),
            });
        }
        for ((p, g), m) in params.iter().zip(grads).zip(&self.first) {
            if p.shape() != g.shape() || p.shape() != m.shape() {
                return Err(AutodiffError::ShapeMismatch {
                    op: "adam_step",
                    left: p.shape(),
                    right: g.shape(),
                });
            }
        }
        self.step += 1;
        let c = &self.config;
        let b1 = T::from_f64_lossy(c.beta1);
        let b2 = T::from_f64_lossy(c.beta2);
        let one = T::one();
        let bias1 = T::from_f64_lossy(1.0 - c.beta1.powi(self.step as i32));
        let bias2 = T::from_f64_lossy(1.0 - c.beta2.powi(self.step as i32));
        let lr = T::from_f64_lossy(c.lr);
        let eps = T::from_f64_lossy(c.eps);
        for (i, p) in params.iter_mut().enumerate() {
            let g = grads[i].data();
            let m = self.first[i].data_mut();
            let v = self.second[i].data_mut();
            for (j, w) in p.data_mut().iter_mut().enumerate() {
                m[j] = b1 * m[j] + (one - b1) * g[j];
                v[j] = b2 * v[j] + (one - b2) * g[j] * g[j];
                let m_hat = m[j] / bias1;
                let v_hat = v[j] / bias2;
                *w = *w - lr * m_hat / (v_hat.sqrt() + eps);
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_gradient_leaves_parameters_unchanged() {
        let mut p = Tensor::<f64>::from_fn(2, 3, |r, c| (r + c) as f64);
        let before = p.clone();
        let mut adam = AdamState::for_params(AdamConfig::gan(1e-3), &[&p]);
        for _ in 0..5 {
            adam.step(&mut [&mut p], &[Tensor::zeros(2, 3)]).unwrap();
        }
        assert_eq!(p, before);
        assert_eq!(adam.step_count(), 5);
    }

    #[test]
    fn first_step_is_normalised_gradient() {
        let cfg = AdamConfig::gan(0.01);
        let g = Tensor::<f64>::new(1, 3, vec![0.5, -2.0, 1e-3]).unwrap();
        let mut p = Tensor::<f64>::zeros(1, 3);
        let mut adam = AdamState::for_params(cfg, &[&p]);
        adam.step(&mut [&mut p], &[g.clone()]).unwrap();
        for (d, gi) in p.data().iter().zip(g.data()) {
            let expect = -cfg.lr * gi / (gi.abs() + cfg.eps);
            assert!((d - expect).abs() < 1e-15, "{d} vs {expect}");
        }
    }

    #[test]
    fn constant_gradient_converges_to_lr_sized_sign_steps() {
        let cfg = AdamConfig::gan(0.1);
        let g = Tensor::<f64>::new(1, 2, vec![3.0, -0.2]).unwrap();
        let mut p = Tensor::<f64>::zeros(1, 2);
        let mut adam = AdamState::for_params(cfg, &[&p]);
        let mut prev = p.clone();
        for _ in 0..200 {
            prev = p.clone();
            adam.step(&mut [&mut p], &[g.clone()]).unwrap();
        }
        let delta: Vec<f64> = p.data().iter().zip(prev.data()).map(|(a, b)| a - b).collect();
        assert!((delta[0] + 0.1).abs() < 1e-6);
        assert!((delta[1] - 0.1).abs() < 1e-6);
    }

    #[test]
    fn shape_mismatch_is_rejected() {
        let mut p = Tensor::<f32>::zeros(2, 2);
        let mut adam = AdamState::for_params(AdamConfig::gan(1e-3), &[&p]);
        assert!(adam.step(&mut [&mut p], &[Tensor::zeros(1, 2)]).is_err());
    }
}
