//! Independent reference implementations used by tests.

pub mod gradcheck;
pub mod metrics_oracle;
pub mod model_oracle;
