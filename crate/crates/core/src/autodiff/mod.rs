//! Reverse-mode automatic differentiation over dense rank-2 tensors.

mod adam;
mod graph;
mod gumbel;
mod input_grad;
mod tensor;

pub use adam::{AdamConfig, AdamState};
pub use graph::{Gradients, Graph, Var};
pub use gumbel::{
    argmax, gumbel_softmax, one_hot_argmax, sample_gumbel, GumbelNoise, RecordingNoise,
    ReplayNoise, ZeroNoise,
};
pub use input_grad::{gradient_penalty, input_gradient_mlp, Activation, DenseVars};
pub use tensor::Tensor;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AutodiffError {
    #[error("{op}: incompatible shapes {left:?} and {right:?}")]
    ShapeMismatch {
        op: &'static str,
        left: [usize; 2],
        right: [usize; 2],
    },
    #[error("buffer holds {actual} values, shape needs {expected}")]
    BufferLength { expected: usize, actual: usize },
    #[error("{op} produced a non-finite value")]
    NonFinite { op: &'static str },
    #[error("backward needs a scalar root, got shape {shape:?}")]
    NonScalarRoot { shape: [usize; 2] },
    #[error("graph cycle detected at node {node}")]
    Cycle { node: usize },
    #[error("reduction over an empty tensor")]
    EmptyReduction,
    #[error("concat of zero tensors")]
    EmptyConcat,
    #[error("gumbel-softmax temperature must be positive, got {0}")]
    InvalidTemperature(f64),
    #[error("input gradient requires piecewise-linear activations")]
    NotPiecewiseLinear,
    #[error("expected {expected} parameter tensors, got {actual}")]
    ParamCount { expected: usize, actual: usize },
}
