//! Two-phase WGAN-GP training with a fairness-penalized second phase.

mod config;
mod objective;
mod penalty;
mod trainer;

pub use config::{Mode, TrainConfig, Variant};
pub use objective::{
    block_bits, critic_objective, generator_objective, interpolate, CriticTerms, FairnessTerm, GeneratorTerms,
};
pub use penalty::{eod_penalty, eod_penalty_value, sp_penalty, sp_penalty_value};
pub use trainer::{
    sample_synthetic, train, write_history_csv, HistoryRow, TrainObserver, TrainedModels, Trainer, UpdateEvent,
    UpdateLog,
};

use thiserror::Error;

use crate::autodiff::AutodiffError;
use crate::data::DataError;
use crate::nn::NnError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TrainError {
    #[error("invalid training config: {0}")]
    Config(String),
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Nn(#[from] NnError),
    #[error("non-finite value in {stage} update at epoch {epoch}, batch {batch}: {detail}")]
    NonFinite {
        epoch: usize,
        batch: usize,
        stage: &'static str,
        detail: String,
    },
}

impl TrainError {
    fn step(epoch: usize, batch: usize, stage: &'static str, e: NnError) -> Self {
        match e {
            NnError::Autodiff(AutodiffError::NonFinite { .. }) => TrainError::NonFinite {
                epoch,
                batch,
                stage,
                detail: e.to_string(),
            },
            other => TrainError::Nn(other),
        }
    }

    /// Errors caused by floating-point blow-up rather than bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            TrainError::NonFinite { .. } | TrainError::Nn(NnError::Autodiff(AutodiffError::NonFinite { .. }))
        )
    }
}
