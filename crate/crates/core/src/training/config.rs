use serde::{Deserialize, Serialize};

use crate::nn::ClassifierConfig;
use crate::scalar::DType;

use super::TrainError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Sp,
    Eod,
    None,
}

impl Variant {
    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Sp => "sp",
            Variant::Eod => "eod",
            Variant::None => "none",
        }
    }
}

impl std::str::FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "sp" => Ok(Variant::Sp),
            "eod" => Ok(Variant::Eod),
            "none" => Ok(Variant::None),
            other => Err(format!("unknown variant {other:?} (expected sp, eod or none)")),
        }
    }
}

impl std::fmt::Display for Variant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Accuracy,
    Fairness,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainConfig {
    pub total_epochs: usize,
    pub fair_epochs: usize,
    pub batch_size: usize,
    pub n_critic: usize,
    pub lambda_fair: f64,
    pub lambda_pen: f64,
    pub lr_critic: f64,
    pub lr_gen_phase1: f64,
    pub lr_gen_phase2: f64,
    pub variant: Variant,
    pub seed: u64,
    pub reset_adam_at_phase_switch: bool,
    pub dtype: DType,
    pub classifier: ClassifierConfig,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            total_epochs: 200,
            fair_epochs: 50,
            batch_size: 256,
            n_critic: 4,
            lambda_fair: 0.5,
            lambda_pen: 10.0,
            lr_critic: 2e-4,
            lr_gen_phase1: 2e-4,
            lr_gen_phase2: 1e-4,
            variant: Variant::None,
            seed: 42,
            reset_adam_at_phase_switch: false,
            dtype: DType::F32,
            classifier: ClassifierConfig::default(),
        }
    }
}

impl TrainConfig {
    pub fn from_json_str(text: &str) -> Result<Self, TrainError> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| TrainError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), TrainError> {
        let bad = |msg: &str| Err(TrainError::Config(msg.to_string()));
        if self.fair_epochs > self.total_epochs {
            return bad("fair_epochs exceeds total_epochs");
        }
        if self.batch_size < 2 {
            return bad("batch_size must be at least 2");
        }
        if self.n_critic == 0 {
            return bad("n_critic must be positive");
        }
        for (name, lr) in [
            ("lr_critic", self.lr_critic),
            ("lr_gen_phase1", self.lr_gen_phase1),
            ("lr_gen_phase2", self.lr_gen_phase2),
        ] {
            if !(lr > 0.0 && lr.is_finite()) {
                return Err(TrainError::Config(format!("{name} must be positive")));
            }
        }
        if !(self.lambda_fair >= 0.0 && self.lambda_fair.is_finite()) {
            return bad("lambda_fair must be non-negative");
        }
        if !(self.lambda_pen >= 0.0 && self.lambda_pen.is_finite()) {
            return bad("lambda_pen must be non-negative");
        }
        self.classifier
            .validate()
            .map_err(|e| TrainError::Config(e.to_string()))
    }

    /// Epochs are 1-based; the last `fair_epochs` run in fairness mode.
    /// With variant `none` that mode only switches the learning rate.
    pub fn mode(&self, epoch: usize) -> Mode {
        if epoch > self.total_epochs - self.fair_epochs {
            Mode::Fairness
        } else {
            Mode::Accuracy
        }
    }

    pub fn first_fair_epoch(&self) -> Option<usize> {
        (self.fair_epochs > 0).then(|| self.total_epochs - self.fair_epochs + 1)
    }
}
