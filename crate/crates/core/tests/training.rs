use std::collections::BTreeSet;

use fairtab::autodiff::{Graph, GumbelNoise, Tensor};
use fairtab::data::{EncodedMatrix, RawTable, Transformer};
use fairtab::nn::{sample_latent, ClassifierConfig, Critic, Linear, GUMBEL_TAU};
use fairtab::toy::{biased_toy, toy_schema};
use fairtab::training::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn toy(rows: usize) -> (RawTable, Transformer, EncodedMatrix) {
    let table = biased_toy(rows, 3);
    let tr = Transformer::fit(&table, &toy_schema()).unwrap();
    let enc = tr.transform(&table).unwrap();
    (table, tr, enc)
}

fn small_config(variant: Variant, total: usize, fair: usize) -> TrainConfig {
    TrainConfig {
        total_epochs: total,
        fair_epochs: fair,
        batch_size: 64,
        variant,
        seed: 11,
        classifier: ClassifierConfig {
            hidden: vec![16],
            epochs: 3,
            batch_size: 64,
            ..Default::default()
        },
        ..Default::default()
    }
}

fn flat<T: fairtab::Scalar>(params: Vec<&Tensor<T>>) -> Vec<T> {
    params.into_iter().flat_map(|t| t.data().to_vec()).collect()
}

#[test]
fn same_seed_gives_identical_models() {
    let (_, _, enc) = toy(300);
    let cfg = small_config(Variant::Eod, 3, 1);
    let a = train::<f32, _>(&enc, &cfg, &mut ()).unwrap();
    let b = train::<f32, _>(&enc, &cfg, &mut ()).unwrap();
    assert_eq!(a.generator, b.generator);
    assert_eq!(a.critic, b.critic);
    assert_eq!(a.classifier, b.classifier);
    assert_eq!(a.history, b.history);
    let c = train::<f32, _>(&enc, &TrainConfig { seed: 12, ..cfg }, &mut ()).unwrap();
    assert_ne!(a.generator, c.generator);
}

#[test]
fn zero_fair_epochs_never_logs_a_penalty() {
    let (_, _, enc) = toy(200);
    let out = train::<f32, _>(&enc, &small_config(Variant::Sp, 2, 0), &mut ()).unwrap();
    assert!(!out.history.is_empty());
    assert!(out
        .history
        .iter()
        .all(|h| h.mode == Mode::Accuracy && h.fair_penalty.is_none()));
}

#[test]
fn penalties_are_bounded() {
    let (_, _, enc) = toy(300);
    for (variant, hi) in [(Variant::Sp, 1.0), (Variant::Eod, 2.0)] {
        let out = train::<f32, _>(&enc, &small_config(variant, 2, 2), &mut ()).unwrap();
        let pens: Vec<f64> = out.history.iter().filter_map(|h| h.fair_penalty).collect();
        assert_eq!(pens.len(), out.history.len());
        assert!(pens.iter().all(|&p| (0.0..=hi).contains(&p)), "{variant}: {pens:?}");
    }
}

#[test]
fn zero_lambda_fair_matches_accuracy_update_up_to_lr() {
    let (_, _, enc) = toy(50);
    let data = enc.to_tensor::<f64>();
    let base = TrainConfig {
        batch_size: 64,
        lambda_fair: 0.0,
        lr_gen_phase1: 2e-4,
        lr_gen_phase2: 5e-5,
        dtype: fairtab::DType::F64,
        ..small_config(Variant::Sp, 1, 1)
    };
    let delta = |cfg: &TrainConfig| {
        let mut t = Trainer::<f64>::new(&enc, cfg).unwrap();
        let before = flat(t.generator.params());
        t.run_epoch(1, &data, &mut ()).unwrap();
        assert_eq!(t.history.len(), 1);
        let after = flat(t.generator.params());
        (t.history[0].mode, after.iter().zip(&before).map(|(a, b)| a - b).collect::<Vec<f64>>())
    };
    let (mode_f, fair) = delta(&base);
    let (mode_a, acc) = delta(&TrainConfig { fair_epochs: 0, ..base.clone() });
    assert_eq!((mode_f, mode_a), (Mode::Fairness, Mode::Accuracy));
    let ratio = base.lr_gen_phase1 / base.lr_gen_phase2;
    let scale = acc.iter().fold(0.0f64, |m, d| m.max(d.abs()));
    assert!(scale > 0.0);
    for (f, a) in fair.iter().zip(&acc) {
        assert!((f * ratio - a).abs() <= 1e-9 * scale, "{f} vs {a}");
    }
}

#[test]
fn constant_critic_leaves_generator_unchanged() {
    let (_, _, enc) = toy(100);
    let mut t = Trainer::<f64>::new(&enc, &small_config(Variant::Sp, 1, 0)).unwrap();
    for l in t.critic.hidden.iter_mut().chain(std::iter::once(&mut t.critic.output)) {
        *l = Linear::zeros(l.fan_in(), l.fan_out());
    }
    t.critic.output.bias = Tensor::scalar(3.0);
    let before = t.generator.clone();
    let (loss, pen) = t.generator_step(32, Mode::Accuracy).unwrap();
    assert_eq!(loss, -3.0);
    assert_eq!(pen, None);
    assert_eq!(t.generator, before);
}

#[test]
fn identical_batches_and_no_penalty_give_zero_critic_loss() {
    let (_, _, enc) = toy(40);
    let real = enc.to_tensor::<f64>();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let critic = Critic::<f64>::new(enc.layout.n_dim, &mut rng);
    let eps = Tensor::from_fn(real.rows(), 1, |r, _| (r as f64 + 0.5) / real.rows() as f64);
    let mut g = Graph::new();
    let vars = critic.bind(&mut g, true);
    let terms = critic_objective(&mut g, &critic, &vars, &real, &real, &eps, 0.0).unwrap();
    assert!(g.value(terms.loss).item().abs() < 1e-12);
    assert!(g.value(terms.wasserstein).item().abs() < 1e-12);
}

#[test]
fn unit_gradient_critic_has_zero_gradient_penalty() {
    let (_, _, enc) = toy(40);
    let n = enc.layout.n_dim;
    let real = enc.to_tensor::<f64>();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let fake = Tensor::from_fn(real.rows(), n, |_, _| rand::Rng::gen::<f64>(&mut rng));
    let mut critic = Critic::<f64>::new(n, &mut rng);
    for l in &mut critic.hidden {
        l.weight = Tensor::from_fn(n, n, |r, c| if r == c { 1.0 } else { 0.0 });
        l.bias = Tensor::full(1, n, 1.0);
    }
    critic.output.weight = Tensor::from_fn(n, 1, |r, _| match r {
        0 => 0.6,
        1 => 0.8,
        _ => 0.0,
    });
    let eps = Tensor::from_fn(real.rows(), 1, |_, _| rand::Rng::gen::<f64>(&mut rng));
    let mut g = Graph::new();
    let vars = critic.bind(&mut g, true);
    let terms = critic_objective(&mut g, &critic, &vars, &real, &fake, &eps, 10.0).unwrap();
    assert!(g.value(terms.gradient_penalty).item().abs() < 1e-12);
}

#[test]
fn logged_penalty_matches_offline_recompute() {
    let (_, _, enc) = toy(200);
    let cfg = TrainConfig {
        dtype: fairtab::DType::F64,
        ..small_config(Variant::Sp, 1, 1)
    };
    let mut t = Trainer::<f64>::new(&enc, &cfg).unwrap();
    let generator = t.generator.clone();
    let classifier = t.classifier.clone();
    let mut rng = t.rng_mut().clone();
    let m = 48;
    let (_, logged) = t.generator_step(m, Mode::Fairness).unwrap();
    let logged = logged.unwrap();

    let z = sample_latent::<f64, _>(m, generator.noise_dim(), &mut rng);
    let mut g = Graph::new();
    let gv = generator.bind(&mut g, false);
    let z = g.constant(z);
    let fake = generator.forward(&mut g, &gv, z, &mut rng, false).unwrap();
    let fake = g.value(fake).clone();
    let layout = &enc.layout;
    let cols: Vec<usize> = layout.feature_ranges().into_iter().flatten().collect();
    let x = Tensor::from_fn(m, cols.len(), |r, c| fake.get(r, cols[c]));
    let p = classifier.predict_proba(&x).unwrap();
    let noise: Tensor<f64> = rng.gumbel(m, 2);
    let pb = layout.protected_block();
    let mut sums = [0.0; 2];
    let mut counts = [0usize; 2];
    for r in 0..m {
        let l1 = p[r].ln() - (1.0 - p[r]).ln();
        let (a, b) = (noise.get(r, 0) / GUMBEL_TAU, (l1 + noise.get(r, 1)) / GUMBEL_TAU);
        let soft = 1.0 / (1.0 + (a - b).exp());
        let block = &fake.row(r)[pb.start..pb.start + pb.width];
        let top = (0..pb.width).fold(0, |best, i| if block[i] > block[best] { i } else { best });
        let k = usize::from(top == layout.privileged_index);
        sums[k] += soft;
        counts[k] += 1;
    }
    assert!(counts.iter().all(|&c| c > 0));
    let expected = (sums[0] / counts[0] as f64 - sums[1] / counts[1] as f64).abs();
    assert!((logged - expected).abs() < 1e-9, "{logged} vs {expected}");
}

fn continuous_mean_gap(real: &EncodedMatrix, fake: &EncodedMatrix) -> f64 {
    let mean = |m: &EncodedMatrix, c: usize| (0..m.rows).map(|r| m.row(r)[c]).sum::<f64>() / m.rows as f64;
    (0..2).map(|c| (mean(real, c) - mean(fake, c)).abs()).sum()
}

#[test]
fn generated_means_move_toward_real_means() {
    let (_, tr, enc) = toy(600);
    let cfg = TrainConfig {
        lr_gen_phase1: 1e-3,
        lr_critic: 1e-3,
        ..small_config(Variant::None, 30, 0)
    };
    let data = enc.to_tensor::<f32>();
    let mut t = Trainer::<f32>::new(&enc, &cfg).unwrap();
    let gap_now = |t: &Trainer<f32>| {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let syn = sample_synthetic(&t.generator, &tr, 2000, &mut rng).unwrap();
        continuous_mean_gap(&enc, &tr.transform(&syn).unwrap())
    };
    let start = gap_now(&t);
    for epoch in 1..=cfg.total_epochs {
        t.run_epoch(epoch, &data, &mut ()).unwrap();
    }
    let end = gap_now(&t);
    assert!(end < start, "{start} -> {end}");
}

#[test]
fn sampling_respects_size_categories_and_seed() {
    let (table, tr, enc) = toy(200);
    let out = train::<f32, _>(&enc, &small_config(Variant::None, 1, 0), &mut ()).unwrap();
    let draw = |seed: u64, n: usize| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        sample_synthetic(&out.generator, &tr, n, &mut rng).unwrap()
    };
    let a = draw(1, 5000);
    assert_eq!(a.len(), 5000);
    assert_eq!(a.header, table.header);
    for c in 2..4 {
        let known: BTreeSet<&str> = table.categories(c).unwrap().into_iter().collect();
        assert!(a.categories(c).unwrap().iter().all(|v| known.contains(v)));
    }
    assert_eq!(draw(1, 300), draw(1, 300));
    assert_ne!(draw(1, 300), draw(2, 300));
}
