use std::io::Write;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::autodiff::{AdamConfig, AdamState, AutodiffError, Gradients, Graph, Tensor, Var};
use crate::data::{BlockLayout, DataError, EncodedMatrix, RawTable, Transformer};
use crate::nn::{sample_latent, train_classifier, Classifier, ClassifierReport, Critic, Generator, NnError};
use crate::scalar::Scalar;

use super::objective::{critic_objective, generator_objective, FairnessTerm};
use super::{Mode, TrainConfig, TrainError, Variant};

/// One generator update and the critic updates that preceded it.
#[derive(Clone, Debug, PartialEq)]
pub struct HistoryRow {
    pub epoch: usize,
    pub batch: usize,
    pub mode: Mode,
    /// Mean Wasserstein estimate over the critic updates of this batch.
    pub critic_w: f64,
    pub gen_loss: f64,
    pub fair_penalty: Option<f64>,
}

pub fn write_history_csv<W: Write>(rows: &[HistoryRow], mut out: W) -> std::io::Result<()> {
    writeln!(out, "epoch,batch,critic_w,gen_loss,fair_penalty")?;
    for r in rows {
        let pen = r.fair_penalty.map_or_else(|| "nan".to_string(), |p| p.to_string());
        writeln!(out, "{},{},{},{},{}", r.epoch, r.batch, r.critic_w, r.gen_loss, pen)?;
    }
    Ok(())
}

/// Hooks called as the training loop runs.
pub trait TrainObserver {
    fn critic_update(&mut self, _epoch: usize, _batch: usize) {}
    fn generator_update(&mut self, _epoch: usize, _batch: usize, _mode: Mode) {}
}

impl TrainObserver for () {}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UpdateEvent {
    Critic { epoch: usize, batch: usize },
    Generator { epoch: usize, batch: usize, mode: Mode },
}

/// Records every update in order.
#[derive(Clone, Debug, Default)]
pub struct UpdateLog {
    pub events: Vec<UpdateEvent>,
}

impl TrainObserver for UpdateLog {
    fn critic_update(&mut self, epoch: usize, batch: usize) {
        self.events.push(UpdateEvent::Critic { epoch, batch });
    }

    fn generator_update(&mut self, epoch: usize, batch: usize, mode: Mode) {
        self.events.push(UpdateEvent::Generator { epoch, batch, mode });
    }
}

pub struct Trainer<T> {
    pub config: TrainConfig,
    pub layout: BlockLayout,
    pub generator: Generator<T>,
    pub critic: Critic<T>,
    pub classifier: Classifier<T>,
    pub classifier_report: ClassifierReport,
    pub history: Vec<HistoryRow>,
    gen_adam: AdamState<T>,
    critic_adam: AdamState<T>,
    rng: ChaCha8Rng,
}

pub struct TrainedModels<T> {
    pub generator: Generator<T>,
    pub critic: Critic<T>,
    pub classifier: Classifier<T>,
    pub classifier_report: ClassifierReport,
    pub history: Vec<HistoryRow>,
}

fn collect_grads<T: Scalar>(mut grads: Gradients<T>, vars: &[Var]) -> Result<Vec<Tensor<T>>, AutodiffError> {
    let out: Vec<Tensor<T>> = vars.iter().map(|&v| grads.take(v)).collect();
    if out.iter().all(Tensor::is_finite) {
        Ok(out)
    } else {
        Err(AutodiffError::NonFinite { op: "backward" })
    }
}

impl<T: Scalar> Trainer<T> {
    /// Initializes the three networks and trains the classifier on `data`.
    pub fn new(data: &EncodedMatrix, config: &TrainConfig) -> Result<Self, TrainError> {
        config.validate()?;
        if data.rows == 0 {
            return Err(TrainError::Data(DataError::EmptyTable));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let layout = data.layout.clone();
        let generator = Generator::new(&layout, &mut rng);
        let critic = Critic::new(layout.n_dim, &mut rng);
        let features = Tensor::from_f64(data.rows, layout.feature_width(), &data.features())
            .map_err(NnError::from)?;
        let (classifier, classifier_report) =
            train_classifier(&features, &data.label_bits(), &config.classifier, &mut rng)?;
        let gen_adam = AdamState::for_params(AdamConfig::gan(config.lr_gen_phase1), &generator.params());
        let critic_adam = AdamState::for_params(AdamConfig::gan(config.lr_critic), &critic.params());
        Ok(Self {
            config: config.clone(),
            layout,
            generator,
            critic,
            classifier,
            classifier_report,
            history: Vec::new(),
            gen_adam,
            critic_adam,
            rng,
        })
    }

    pub fn rng_mut(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// One critic update on `real`; returns the Wasserstein estimate.
    pub fn critic_step(&mut self, real: &Tensor<T>) -> Result<f64, NnError> {
        let m = real.rows();
        let fake = self.generator.sample(m, &mut self.rng, false)?;
        let rng = &mut self.rng;
        let eps = Tensor::from_fn(m, 1, |_, _| T::from_f64_lossy(rng.gen::<f64>()));
        let mut g = Graph::new();
        let vars = self.critic.bind(&mut g, true);
        let lambda = T::from_f64_lossy(self.config.lambda_pen);
        let terms = critic_objective(&mut g, &self.critic, &vars, real, &fake, &eps, lambda)?;
        let w = g.value(terms.wasserstein).item().to_f64_lossy();
        let grads = collect_grads(g.backward(terms.loss)?, &vars.vars())?;
        self.critic_adam.step(&mut self.critic.params_mut(), &grads)?;
        Ok(w)
    }

    /// One generator update on a fresh batch of `m` latent rows; returns
    /// the loss and, in fairness mode with a penalty, the penalty value.
    pub fn generator_step(&mut self, m: usize, mode: Mode) -> Result<(f64, Option<f64>), NnError> {
        let z = sample_latent(m, self.generator.noise_dim(), &mut self.rng);
        let mut g = Graph::new();
        let gvars = self.generator.bind(&mut g, true);
        let cvars = self.critic.bind(&mut g, false);
        let hvars = self.classifier.bind(&mut g, false);
        let z = g.constant(z);
        let fairness = (mode == Mode::Fairness && self.config.variant != Variant::None).then(|| FairnessTerm {
            classifier: &self.classifier,
            vars: &hvars,
            layout: &self.layout,
            variant: self.config.variant,
            lambda_fair: T::from_f64_lossy(self.config.lambda_fair),
        });
        let terms = generator_objective(
            &mut g,
            &self.generator,
            &gvars,
            &self.critic,
            &cvars,
            z,
            &mut self.rng,
            fairness,
        )?;
        let loss = g.value(terms.loss).item().to_f64_lossy();
        let penalty = terms.penalty.map(|p| g.value(p).item().to_f64_lossy());
        let grads = collect_grads(g.backward(terms.loss)?, &gvars.vars())?;
        self.gen_adam.step(&mut self.generator.params_mut(), &grads)?;
        Ok((loss, penalty))
    }

    fn enter_mode(&mut self, mode: Mode) {
        let lr = match mode {
            Mode::Accuracy => self.config.lr_gen_phase1,
            Mode::Fairness => self.config.lr_gen_phase2,
        };
        self.gen_adam.set_lr(lr);
    }

    /// Runs epoch `epoch` (1-based) over `data` in a seeded random order.
    pub fn run_epoch<O: TrainObserver + ?Sized>(
        &mut self,
        epoch: usize,
        data: &Tensor<T>,
        observer: &mut O,
    ) -> Result<(), TrainError> {
        let mode = self.config.mode(epoch);
        if Some(epoch) == self.config.first_fair_epoch() && self.config.reset_adam_at_phase_switch {
            self.gen_adam.reset();
        }
        self.enter_mode(mode);
        let mut order: Vec<usize> = (0..data.rows()).collect();
        order.shuffle(&mut self.rng);
        for (b, idx) in order.chunks(self.config.batch_size).enumerate() {
            let batch = b + 1;
            let real = data.gather_rows(idx);
            let mut w_sum = 0.0;
            for _ in 0..self.config.n_critic {
                w_sum += self
                    .critic_step(&real)
                    .map_err(|e| TrainError::step(epoch, batch, "critic", e))?;
                observer.critic_update(epoch, batch);
            }
            let (gen_loss, fair_penalty) = self
                .generator_step(idx.len(), mode)
                .map_err(|e| TrainError::step(epoch, batch, "generator", e))?;
            observer.generator_update(epoch, batch, mode);
            self.history.push(HistoryRow {
                epoch,
                batch,
                mode,
                critic_w: w_sum / self.config.n_critic as f64,
                gen_loss,
                fair_penalty,
            });
        }
        Ok(())
    }

    pub fn finish(self) -> TrainedModels<T> {
        TrainedModels {
            generator: self.generator,
            critic: self.critic,
            classifier: self.classifier,
            classifier_report: self.classifier_report,
            history: self.history,
        }
    }
}

/// Full training run: classifier, then `total_epochs` of alternating
/// critic and generator updates.
pub fn train<T: Scalar, O: TrainObserver + ?Sized>(
    data: &EncodedMatrix,
    config: &TrainConfig,
    observer: &mut O,
) -> Result<TrainedModels<T>, TrainError> {
    let mut trainer = Trainer::new(data, config)?;
    let tensor = data.to_tensor::<T>();
    for epoch in 1..=config.total_epochs {
        trainer.run_epoch(epoch, &tensor, observer)?;
    }
    Ok(trainer.finish())
}

const SAMPLE_CHUNK: usize = 4096;

/// `n` hard generator samples decoded to a raw table.
pub fn sample_synthetic<T: Scalar, R: Rng>(
    generator: &Generator<T>,
    transformer: &Transformer,
    n: usize,
    rng: &mut R,
) -> Result<RawTable, TrainError> {
    let mut data = Vec::with_capacity(n * transformer.n_dim());
    let mut left = n;
    while left > 0 {
        let k = left.min(SAMPLE_CHUNK);
        let rows = generator.sample(k, rng, true)?;
        data.extend(rows.to_f64_vec());
        left -= k;
    }
    let m = EncodedMatrix {
        data,
        rows: n,
        layout: transformer.layout.clone(),
    };
    Ok(transformer.inverse_transform(&m)?)
}
