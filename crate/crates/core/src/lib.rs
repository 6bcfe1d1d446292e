//! Fairness-aware synthesis of tabular data.
//!
//! A WGAN-GP generator learns a mixed continuous/categorical table; an
//! optional second phase adds a statistical-parity or equalized-odds
//! penalty measured by a pre-trained classifier. The crate also ships
//! the data transformer, group fairness metrics and a cross-validated
//! benchmark harness.
//!
//! Numerical code is generic over [`Scalar`] (`f32` or `f64`); the aliases
//! below name the common instantiations.

pub mod autodiff;
pub mod checkpoint;
pub mod data;
pub mod eval;
pub mod metrics;
pub mod nn;
pub mod scalar;
pub mod toy;
pub mod training;

pub use scalar::{DType, Scalar};

pub type Tensor32 = autodiff::Tensor<f32>;
pub type Tensor64 = autodiff::Tensor<f64>;
pub type Graph32 = autodiff::Graph<f32>;
pub type Graph64 = autodiff::Graph<f64>;
pub type Generator32 = nn::Generator<f32>;
pub type Generator64 = nn::Generator<f64>;
pub type Critic32 = nn::Critic<f32>;
pub type Critic64 = nn::Critic<f64>;
pub type Classifier32 = nn::Classifier<f32>;
pub type Classifier64 = nn::Classifier<f64>;
pub type Bundle32 = checkpoint::ModelBundle<f32>;
pub type Bundle64 = checkpoint::ModelBundle<f64>;
