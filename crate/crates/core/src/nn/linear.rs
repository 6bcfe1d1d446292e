use rand::Rng;

use crate::autodiff::{AutodiffError, DenseVars, Graph, Tensor, Var};
use crate::scalar::Scalar;

/// Dense layer `y = x·W + b` with `W: [in, out]` and `b: [1, out]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Linear<T> {
    pub weight: Tensor<T>,
    pub bias: Tensor<T>,
}

impl<T: Scalar> Linear<T> {
    /// Weights and biases drawn from `U(−√(1/fan_in), √(1/fan_in))`.
    pub fn init<R: Rng + ?Sized>(fan_in: usize, fan_out: usize, rng: &mut R) -> Self {
        let bound = (1.0 / fan_in as f64).sqrt();
        let mut draw = || T::from_f64_lossy(rng.gen_range(-bound..bound));
        let weight = Tensor::from_fn(fan_in, fan_out, |_, _| draw());
        let bias = Tensor::from_fn(1, fan_out, |_, _| draw());
        Self { weight, bias }
    }

    pub fn zeros(fan_in: usize, fan_out: usize) -> Self {
        Self {
            weight: Tensor::zeros(fan_in, fan_out),
            bias: Tensor::zeros(1, fan_out),
        }
    }

    pub fn fan_in(&self) -> usize {
        self.weight.rows()
    }

    pub fn fan_out(&self) -> usize {
        self.weight.cols()
    }

    pub fn bind(&self, g: &mut Graph<T>, trainable: bool) -> DenseVars {
        let (weight, bias) = if trainable {
            (g.param(self.weight.clone()), g.param(self.bias.clone()))
        } else {
            (g.constant(self.weight.clone()), g.constant(self.bias.clone()))
        };
        DenseVars { weight, bias }
    }

    pub fn cast<U: Scalar>(&self) -> Linear<U> {
        Linear {
            weight: self.weight.cast(),
            bias: self.bias.cast(),
        }
    }
}

pub fn dense<T: Scalar>(g: &mut Graph<T>, x: Var, layer: DenseVars) -> Result<Var, AutodiffError> {
    let xw = g.matmul(x, layer.weight)?;
    g.add_row(xw, layer.bias)
}

pub(crate) fn push_vars(out: &mut Vec<Var>, d: DenseVars) {
    out.push(d.weight);
    out.push(d.bias);
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn init_respects_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let l = Linear::<f64>::init(16, 5, &mut rng);
        let b = 0.25;
        assert!(l.weight.data().iter().chain(l.bias.data()).all(|v| v.abs() <= b));
        assert_eq!(l.weight.shape(), [16, 5]);
        assert_eq!(l.bias.shape(), [1, 5]);
    }

    #[test]
    fn dense_matches_hand_product() {
        let l = Linear {
            weight: Tensor::new(2, 1, vec![2.0, -1.0]).unwrap(),
            bias: Tensor::new(1, 1, vec![0.5]).unwrap(),
        };
        let mut g = Graph::<f64>::new();
        let vars = l.bind(&mut g, false);
        let x = g.constant(Tensor::new(2, 2, vec![1.0, 1.0, 3.0, 2.0]).unwrap());
        let y = dense(&mut g, x, vars).unwrap();
        assert_eq!(g.value(y).data(), &[1.5, 4.5]);
    }
}
