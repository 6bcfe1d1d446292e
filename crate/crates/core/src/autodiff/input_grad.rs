//! Input gradients of piecewise-linear MLPs as differentiable graphs.
//!
//! For `C(x) = w_outᵀ φ(W_L … φ(W_1 x + b_1) … + b_L) + b_out` with
//! piecewise-linear `φ`, the input gradient is
//! `∇ₓC = W_1ᵀ D_1 W_2ᵀ D_2 … W_Lᵀ D_L w_out`, where each `D_k` is the
//! diagonal activation-slope mask at the forward point. The masks are
//! constants almost everywhere, so the product above, built from the weight
//! nodes, can be back-propagated to the weights like any other graph.

use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

use super::graph::{Graph, Var};
use super::tensor::Tensor;
use super::AutodiffError;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Activation {
    Identity,
    Relu,
    LeakyRelu { slope: f64 },
    Tanh,
}

impl Activation {
    pub fn apply<T: Scalar>(self, g: &mut Graph<T>, x: Var) -> Result<Var, AutodiffError> {
        match self {
            Activation::Identity => Ok(x),
            Activation::Relu => g.relu(x),
            Activation::LeakyRelu { slope } => g.leaky_relu(x, T::from_f64_lossy(slope)),
            Activation::Tanh => g.tanh(x),
        }
    }

    pub fn is_piecewise_linear(self) -> bool {
        !matches!(self, Activation::Tanh)
    }

    /// Slope of the activation at each pre-activation value.
    fn slope_mask<T: Scalar>(self, pre: &Tensor<T>) -> Result<Tensor<T>, AutodiffError> {
        let (pos, neg) = match self {
            Activation::Identity => (1.0, 1.0),
            Activation::Relu => (1.0, 0.0),
            Activation::LeakyRelu { slope } => (1.0, slope),
            Activation::Tanh => return Err(AutodiffError::NotPiecewiseLinear),
        };
        let (pos, neg) = (T::from_f64_lossy(pos), T::from_f64_lossy(neg));
        Ok(pre.map(|x| if x > T::zero() { pos } else { neg }))
    }
}

/// Weight and bias nodes of one dense layer `y = x·W + b`, `W: [in, out]`.
#[derive(Clone, Copy, Debug)]
pub struct DenseVars {
    pub weight: Var,
    pub bias: Var,
}

/// Builds `∇ₓ f(x)` for every row of `x` as a graph over the layer weights.
///
/// `hidden` are the activated layers; `output` is the final linear layer
/// with a single output unit. The returned node has the shape of `x`.
pub fn input_gradient_mlp<T: Scalar>(
    g: &mut Graph<T>,
    hidden: &[(DenseVars, Activation)],
    output: DenseVars,
    x: Var,
) -> Result<Var, AutodiffError> {
    if hidden.iter().any(|(_, a)| !a.is_piecewise_linear()) {
        return Err(AutodiffError::NotPiecewiseLinear);
    }
    let [rows, _] = g.shape(x);
    let out_shape = g.shape(output.weight);
    if out_shape[1] != 1 {
        return Err(AutodiffError::ShapeMismatch {
            op: "input_gradient_mlp",
            left: out_shape,
            right: [out_shape[0], 1],
        });
    }

    // Forward pass values only; the masks are held constant.
    let mut masks = Vec::with_capacity(hidden.len());
    let mut h = g.value(x).clone();
    for (layer, act) in hidden {
        let mut pre = h.matmul(g.value(layer.weight))?;
        let bias = g.value(layer.bias);
        for r in 0..pre.rows() {
            for c in 0..pre.cols() {
                pre.set(r, c, pre.get(r, c) + bias.get(0, c));
            }
        }
        masks.push(act.slope_mask(&pre)?);
        h = pre.map(|v| match act {
            Activation::Identity => v,
            Activation::Relu => v.max(T::zero()),
            Activation::LeakyRelu { slope } => {
                if v > T::zero() {
                    v
                } else {
                    v * T::from_f64_lossy(*slope)
                }
            }
            Activation::Tanh => unreachable!(),
        });
    }

    // Reverse chain: grad = w_outᵀ broadcast, then ⊙ D_k and · W_kᵀ.
    let w_out_t = g.transpose(output.weight)?;
    let mut grad = g.broadcast_rows(w_out_t, rows)?;
    for ((layer, _), mask) in hidden.iter().zip(masks).rev() {
        let mask = g.constant(mask);
        let gated = g.mul(grad, mask)?;
        let w_t = g.transpose(layer.weight)?;
        grad = g.matmul(gated, w_t)?;
    }
    Ok(grad)
}

/// `λ · mean_rows((‖∇ₓ f‖₂ − 1)²)`.
pub fn gradient_penalty<T: Scalar>(
    g: &mut Graph<T>,
    input_grad: Var,
    weight: T,
) -> Result<Var, AutodiffError> {
    let sq = g.square(input_grad)?;
    let norm_sq = g.sum_rows(sq)?;
    let norm = g.sqrt(norm_sq)?;
    let dev = g.add_scalar(norm, -T::one())?;
    let dev_sq = g.square(dev)?;
    let mean = g.mean(dev_sq)?;
    g.scale(mean, weight)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(rows: usize, cols: usize, v: &[f64]) -> Tensor<f64> {
        Tensor::new(rows, cols, v.to_vec()).unwrap()
    }

    #[test]
    fn linear_map_gradient_is_weight_vector() {
        let mut g = Graph::new();
        let w = g.param(t(3, 1, &[0.5, -1.0, 2.0]));
        let b = g.param(t(1, 1, &[0.3]));
        let x = g.constant(t(2, 3, &[1.0, 2.0, 3.0, -4.0, 0.0, 9.0]));
        let grad = input_gradient_mlp(&mut g, &[], DenseVars { weight: w, bias: b }, x).unwrap();
        assert_eq!(g.value(grad).data(), &[0.5, -1.0, 2.0, 0.5, -1.0, 2.0]);
    }

    #[test]
    fn unit_norm_gradient_contributes_no_penalty() {
        let mut g = Graph::new();
        let w = g.param(t(2, 1, &[0.6, 0.8]));
        let b = g.param(t(1, 1, &[0.0]));
        let x = g.constant(t(3, 2, &[1.0, 1.0, -2.0, 0.5, 0.0, 0.0]));
        let grad = input_gradient_mlp(&mut g, &[], DenseVars { weight: w, bias: b }, x).unwrap();
        let pen = gradient_penalty(&mut g, grad, 10.0).unwrap();
        assert!(g.value(pen).item().abs() < 1e-15);
        let grads = g.backward(pen).unwrap();
        assert!(grads.wrt(w).data().iter().all(|v| v.abs() < 1e-15));
    }

    #[test]
    fn smooth_activation_is_rejected() {
        let mut g = Graph::<f64>::new();
        let w = g.param(t(1, 1, &[1.0]));
        let b = g.param(t(1, 1, &[0.0]));
        let x = g.constant(t(1, 1, &[1.0]));
        let layer = DenseVars { weight: w, bias: b };
        let r = input_gradient_mlp(&mut g, &[(layer, Activation::Tanh)], layer, x);
        assert!(matches!(r, Err(AutodiffError::NotPiecewiseLinear)));
    }

    #[test]
    fn matches_hand_derivative_of_one_hidden_layer() {
        // f(x) = w2ᵀ leaky(W1ᵀx + b1); x = [1, -1]
        let mut g = Graph::new();
        let w1 = g.param(t(2, 2, &[1.0, 2.0, 3.0, -1.0]));
        let b1 = g.param(t(1, 2, &[0.0, 0.0]));
        let w2 = g.param(t(2, 1, &[0.5, -2.0]));
        let b2 = g.param(t(1, 1, &[0.0]));
        let x = g.constant(t(1, 2, &[1.0, -1.0]));
        // pre = [1-3, 2+1] = [-2, 3] → mask [0.01, 1]
        let grad = input_gradient_mlp(
            &mut g,
            &[(DenseVars { weight: w1, bias: b1 }, Activation::LeakyRelu { slope: 0.01 })],
            DenseVars { weight: w2, bias: b2 },
            x,
        )
        .unwrap();
        // gated = [0.5*0.01, -2*1] = [0.005, -2]; ·W1ᵀ → [0.005*1 + -2*2, 0.005*3 + -2*-1]
        let v = g.value(grad);
        assert!((v.get(0, 0) - (0.005 - 4.0)).abs() < 1e-12);
        assert!((v.get(0, 1) - (0.015 + 2.0)).abs() < 1e-12);
    }
}
