use rand::Rng;
use rand_distr::StandardNormal;

use crate::autodiff::{gumbel_softmax, DenseVars, Graph, GumbelNoise, Tensor, Var};
use crate::data::BlockLayout;
use crate::scalar::Scalar;

use super::linear::{dense, push_vars, Linear};
use super::{NnError, GUMBEL_TAU};

/// `z → ReLU(FC) → [ReLU(FC_num) | gumbel(FC_1) | … | gumbel(FC_k)]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Generator<T> {
    pub hidden: Linear<T>,
    /// Absent when the layout has no continuous columns.
    pub numeric: Option<Linear<T>>,
    /// One head per categorical block, in encoded order.
    pub heads: Vec<Linear<T>>,
    pub tau: f64,
}

#[derive(Clone, Debug)]
pub struct GeneratorVars {
    pub hidden: DenseVars,
    pub numeric: Option<DenseVars>,
    pub heads: Vec<DenseVars>,
}

impl GeneratorVars {
    /// Same order as [`Generator::params`].
    pub fn vars(&self) -> Vec<Var> {
        let mut out = Vec::new();
        push_vars(&mut out, self.hidden);
        if let Some(n) = self.numeric {
            push_vars(&mut out, n);
        }
        for h in &self.heads {
            push_vars(&mut out, *h);
        }
        out
    }
}

/// Standard-normal latent batch.
pub fn sample_latent<T: Scalar, R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Tensor<T> {
    Tensor::from_fn(rows, cols, |_, _| {
        T::from_f64_lossy(rng.sample::<f64, _>(StandardNormal))
    })
}

impl<T: Scalar> Generator<T> {
    pub fn new<R: Rng + ?Sized>(layout: &BlockLayout, rng: &mut R) -> Self {
        let n = layout.n_dim;
        let hidden = Linear::init(n, n, rng);
        let numeric = (layout.n_num > 0).then(|| Linear::init(n, layout.n_num, rng));
        let heads = layout
            .categorical_blocks()
            .iter()
            .map(|b| Linear::init(n, b.width, rng))
            .collect();
        Self {
            hidden,
            numeric,
            heads,
            tau: GUMBEL_TAU,
        }
    }

    pub fn noise_dim(&self) -> usize {
        self.hidden.fan_in()
    }

    pub fn output_dim(&self) -> usize {
        self.numeric.as_ref().map_or(0, Linear::fan_out)
            + self.heads.iter().map(Linear::fan_out).sum::<usize>()
    }

    pub fn bind(&self, g: &mut Graph<T>, trainable: bool) -> GeneratorVars {
        GeneratorVars {
            hidden: self.hidden.bind(g, trainable),
            numeric: self.numeric.as_ref().map(|l| l.bind(g, trainable)),
            heads: self.heads.iter().map(|l| l.bind(g, trainable)).collect(),
        }
    }

    pub fn forward<N: GumbelNoise<T> + ?Sized>(
        &self,
        g: &mut Graph<T>,
        vars: &GeneratorVars,
        z: Var,
        noise: &mut N,
        hard: bool,
    ) -> Result<Var, NnError> {
        let [_, width] = g.shape(z);
        if width != self.noise_dim() {
            return Err(NnError::WidthMismatch {
                expected: self.noise_dim(),
                found: width,
            });
        }
        let pre = dense(g, z, vars.hidden)?;
        let h = g.relu(pre)?;
        let mut parts = Vec::with_capacity(vars.heads.len() + 1);
        if let Some(num) = vars.numeric {
            let pre = dense(g, h, num)?;
            parts.push(g.relu(pre)?);
        }
        let tau = T::from_f64_lossy(self.tau);
        for head in &vars.heads {
            let logits = dense(g, h, *head)?;
            parts.push(gumbel_softmax(g, logits, tau, noise, hard)?);
        }
        Ok(g.concat(&parts)?)
    }

    /// Draws `n` rows without recording gradients.
    pub fn sample<R: Rng>(&self, n: usize, rng: &mut R, hard: bool) -> Result<Tensor<T>, NnError> {
        let z = sample_latent(n, self.noise_dim(), rng);
        let mut g = Graph::new();
        let vars = self.bind(&mut g, false);
        let z = g.constant(z);
        let out = self.forward(&mut g, &vars, z, rng, hard)?;
        Ok(g.value(out).clone())
    }

    pub fn params(&self) -> Vec<&Tensor<T>> {
        let mut out = vec![&self.hidden.weight, &self.hidden.bias];
        if let Some(n) = &self.numeric {
            out.extend([&n.weight, &n.bias]);
        }
        for h in &self.heads {
            out.extend([&h.weight, &h.bias]);
        }
        out
    }

    pub fn params_mut(&mut self) -> Vec<&mut Tensor<T>> {
        let mut out = vec![&mut self.hidden.weight, &mut self.hidden.bias];
        if let Some(n) = &mut self.numeric {
            out.extend([&mut n.weight, &mut n.bias]);
        }
        for h in &mut self.heads {
            out.extend([&mut h.weight, &mut h.bias]);
        }
        out
    }

    pub fn cast<U: Scalar>(&self) -> Generator<U> {
        Generator {
            hidden: self.hidden.cast(),
            numeric: self.numeric.as_ref().map(Linear::cast),
            heads: self.heads.iter().map(Linear::cast).collect(),
            tau: self.tau,
        }
    }
}
