use rand::Rng;

use crate::autodiff::{input_gradient_mlp, Activation, DenseVars, Graph, Tensor, Var};
use crate::scalar::Scalar;

use super::linear::{dense, push_vars, Linear};
use super::NnError;

pub const CRITIC_SLOPE: f64 = 0.01;

/// Two LeakyReLU layers of width `N_dim` and a linear scalar head.
#[derive(Clone, Debug, PartialEq)]
pub struct Critic<T> {
    pub hidden: Vec<Linear<T>>,
    pub activation: Activation,
    pub output: Linear<T>,
}

#[derive(Clone, Debug)]
pub struct CriticVars {
    pub hidden: Vec<(DenseVars, Activation)>,
    pub output: DenseVars,
}

impl CriticVars {
    /// Same order as [`Critic::params`].
    pub fn vars(&self) -> Vec<Var> {
        let mut out = Vec::new();
        for (d, _) in &self.hidden {
            push_vars(&mut out, *d);
        }
        push_vars(&mut out, self.output);
        out
    }
}

impl<T: Scalar> Critic<T> {
    pub fn new<R: Rng + ?Sized>(n_dim: usize, rng: &mut R) -> Self {
        let hidden = vec![Linear::init(n_dim, n_dim, rng), Linear::init(n_dim, n_dim, rng)];
        let output = Linear::init(n_dim, 1, rng);
        Self {
            hidden,
            activation: Activation::LeakyRelu { slope: CRITIC_SLOPE },
            output,
        }
    }

    pub fn input_dim(&self) -> usize {
        self.hidden.first().unwrap_or(&self.output).fan_in()
    }

    pub fn bind(&self, g: &mut Graph<T>, trainable: bool) -> CriticVars {
        CriticVars {
            hidden: self
                .hidden
                .iter()
                .map(|l| (l.bind(g, trainable), self.activation))
                .collect(),
            output: self.output.bind(g, trainable),
        }
    }

    fn check_width(&self, g: &Graph<T>, x: Var) -> Result<(), NnError> {
        let [_, width] = g.shape(x);
        if width != self.input_dim() {
            return Err(NnError::WidthMismatch {
                expected: self.input_dim(),
                found: width,
            });
        }
        Ok(())
    }

    /// One score per row, shape `[m, 1]`.
    pub fn forward(&self, g: &mut Graph<T>, vars: &CriticVars, x: Var) -> Result<Var, NnError> {
        self.check_width(g, x)?;
        let mut h = x;
        for (layer, act) in &vars.hidden {
            let pre = dense(g, h, *layer)?;
            h = act.apply(g, pre)?;
        }
        Ok(dense(g, h, vars.output)?)
    }

    /// `∇ₓ C(x)` per row as a node differentiable w.r.t. the critic weights.
    pub fn input_gradient(&self, g: &mut Graph<T>, vars: &CriticVars, x: Var) -> Result<Var, NnError> {
        self.check_width(g, x)?;
        Ok(input_gradient_mlp(g, &vars.hidden, vars.output, x)?)
    }

    pub fn scores(&self, x: &Tensor<T>) -> Result<Tensor<T>, NnError> {
        let mut g = Graph::new();
        let vars = self.bind(&mut g, false);
        let x = g.constant(x.clone());
        let s = self.forward(&mut g, &vars, x)?;
        Ok(g.value(s).clone())
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

    pub fn cast<U: Scalar>(&self) -> Critic<U> {
        Critic {
            hidden: self.hidden.iter().map(Linear::cast).collect(),
            activation: self.activation,
            output: self.output.cast(),
        }
    }
}
