//! Central finite-difference checks of every training loss term.

use fairtab::autodiff::{Graph, RecordingNoise, ReplayNoise, Tensor};
use fairtab::data::{Block, BlockLayout, ColumnKind};
use fairtab::nn::{sample_latent, Classifier, Critic, Generator};
use fairtab::training::{critic_objective, generator_objective, FairnessTerm, Variant};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Copy, Debug)]
pub struct Settings {
    pub h: f64,
    pub tol: f64,
    /// Minimum distance of any kink input or argmax gap from its switch point.
    pub margin: f64,
    /// Tensors whose gradient max-norm is below this are compared on an
    /// absolute scale.
    pub floor: f64,
    /// Minimum `‖∇ₓC(x̂)‖` per row; the penalty's norm is not
    /// differentiable at zero.
    pub norm_margin: f64,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            h: 1e-4,
            tol: 1e-5,
            margin: 1e-3,
            floor: 1e-8,
            norm_margin: 0.1,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct TermStats {
    pub name: &'static str,
    pub checked: usize,
    pub max_err: f64,
    pub failures: usize,
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    pub trials: usize,
    pub rejected: usize,
    pub terms: Vec<TermStats>,
    pub first_failure: Option<String>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.terms.iter().all(|t| t.failures == 0)
    }

    pub fn max_err(&self) -> f64 {
        self.terms.iter().map(|t| t.max_err).fold(0.0, f64::max)
    }

    fn term(&mut self, name: &'static str) -> &mut TermStats {
        if let Some(i) = self.terms.iter().position(|t| t.name == name) {
            return &mut self.terms[i];
        }
        self.terms.push(TermStats {
            name,
            ..Default::default()
        });
        self.terms.last_mut().unwrap()
    }
}

/// `‖a − n‖∞ / max(‖a‖∞, ‖n‖∞, floor)` over a full gradient vector.
pub fn rel_err(analytic: &[f64], numeric: &[f64], floor: f64) -> f64 {
    let inf = |v: &mut dyn Iterator<Item = f64>| v.fold(0.0f64, |m, x| m.max(x.abs()));
    let diff = inf(&mut analytic.iter().zip(numeric).map(|(a, n)| a - n));
    let scale = inf(&mut analytic.iter().copied()).max(inf(&mut numeric.iter().copied()));
    diff / scale.max(floor)
}

/// Random layout: up to two numeric columns, an optional extra categorical
/// feature, a binary protected block and a binary label block.
pub fn random_layout<R: Rng>(rng: &mut R) -> BlockLayout {
    let n_num = rng.gen_range(0..=2);
    let extra = if rng.gen_bool(0.5) { rng.gen_range(2..=3) } else { 0 };
    let mut blocks = Vec::new();
    for i in 0..n_num {
        blocks.push(Block {
            column: i,
            kind: ColumnKind::Continuous,
            start: i,
            width: 1,
        });
    }
    let mut start = n_num;
    let mut widths = Vec::new();
    if extra > 0 {
        widths.push(extra);
    }
    widths.extend([2, 2]);
    for w in widths {
        blocks.push(Block {
            column: blocks.len(),
            kind: ColumnKind::Categorical,
            start,
            width: w,
        });
        start += w;
    }
    let n = blocks.len();
    BlockLayout {
        blocks,
        n_num,
        n_dim: start,
        label_column: n - 1,
        positive_index: rng.gen_range(0..2),
        protected_column: n - 2,
        privileged_index: rng.gen_range(0..2),
    }
}

fn uniform<R: Rng>(rows: usize, cols: usize, lo: f64, hi: f64, rng: &mut R) -> Tensor<f64> {
    Tensor::from_fn(rows, cols, |_, _| rng.gen_range(lo..hi))
}

fn argmax_margin(x: &Tensor<f64>, block: &Block) -> f64 {
    (0..x.rows())
        .map(|r| {
            let mut v = x.row(r)[block.range()].to_vec();
            v.sort_by(|a, b| b.partial_cmp(a).unwrap());
            v[0] - v[1]
        })
        .fold(f64::INFINITY, f64::min)
}

fn min_row_norm(x: &Tensor<f64>) -> f64 {
    (0..x.rows())
        .map(|r| x.row(r).iter().map(|v| v * v).sum::<f64>().sqrt())
        .fold(f64::INFINITY, f64::min)
}

/// Loss, gradients and the piece signature (activation pattern plus any
/// argmax memberships) at the current parameters.
pub struct Point {
    pub loss: f64,
    pub grads: Vec<Tensor<f64>>,
    pub pattern: Vec<bool>,
}

type Eval<'a, M> = dyn FnMut(&M) -> Option<Point> + 'a;

/// Compares analytic gradients of `eval` with central differences over
/// every parameter element. `eval` returns `None` when the point is too
/// close to a kink; a perturbation that changes the piece signature also
/// rejects the configuration.
fn compare<M>(
    model: &mut M,
    params_mut: for<'a> fn(&'a mut M) -> Vec<&'a mut Tensor<f64>>,
    eval: &mut Eval<'_, M>,
    s: &Settings,
    stats: &mut TermStats,
    first_failure: &mut Option<String>,
) -> bool {
    let Some(base) = eval(model) else {
        return false;
    };
    let analytic = base.grads;
    let pattern = base.pattern;
    let shapes: Vec<usize> = params_mut(model).iter().map(|t| t.len()).collect();
    let mut perturbed = |model: &mut M, k: usize, j: usize, delta: f64| -> Option<f64> {
        params_mut(model)[k].data_mut()[j] += delta;
        let out = eval(model).filter(|p| p.pattern == pattern).map(|p| p.loss);
        params_mut(model)[k].data_mut()[j] -= delta;
        out
    };
    let mut numeric = Vec::new();
    for (k, &len) in shapes.iter().enumerate() {
        for j in 0..len {
            let plus = perturbed(model, k, j, s.h);
            let minus = perturbed(model, k, j, -s.h);
            let (Some(plus), Some(minus)) = (plus, minus) else {
                return false;
            };
            numeric.push((plus - minus) / (2.0 * s.h));
        }
    }
    let flat: Vec<f64> = analytic.iter().flat_map(|t| t.data().iter().copied()).collect();
    let err = rel_err(&flat, &numeric, s.floor);
    stats.checked += flat.len();
    stats.max_err = stats.max_err.max(err);
    if err > s.tol {
        stats.failures += 1;
        if first_failure.is_none() {
            let (j, d) = flat
                .iter()
                .zip(&numeric)
                .map(|(a, n)| (a - n).abs())
                .enumerate()
                .fold((0, 0.0), |best, (j, d)| if d > best.1 { (j, d) } else { best });
            *first_failure = Some(format!(
                "{}: rel err {err:e}; worst element {j}: analytic {:e}, numeric {:e}, diff {d:e}",
                stats.name, flat[j], numeric[j]
            ));
        }
    }
    true
}

/// Runs `trials` accepted random configurations.
pub fn run(trials: usize, seed: u64, s: &Settings) -> Report {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = Report::default();
    while report.trials < trials {
        if trial(&mut rng, s, &mut report) {
            report.trials += 1;
        } else {
            report.rejected += 1;
        }
    }
    report
}

fn trial(rng: &mut ChaCha8Rng, s: &Settings, report: &mut Report) -> bool {
    let layout = random_layout(rng);
    let n = layout.n_dim;
    let m = rng.gen_range(2..=6);
    let mut generator = Generator::<f64>::new(&layout, rng);
    let mut critic = Critic::<f64>::new(n, rng);
    // input-gradient norms of order one
    let gain = rng.gen_range(1.5..3.0);
    for p in critic.params_mut() {
        p.data_mut().iter_mut().for_each(|v| *v *= gain);
    }
    let hidden = [rng.gen_range(2..=8), rng.gen_range(2..=8)];
    let mut classifier = Classifier::<f64>::new(layout.feature_width(), &hidden, rng);
    let real = uniform(m, n, 0.0, 1.0, rng);
    let fake = uniform(m, n, 0.0, 1.0, rng);
    let eps = uniform(m, 1, 0.0, 1.0, rng);
    let lambda_pen = rng.gen_range(1.0..10.0);
    let lambda_fair = rng.gen_range(0.5..2.0);
    let z = sample_latent::<f64, _>(m, n, rng);
    let mut recorder = RecordingNoise::new(rng);
    // Two generator passes and one classifier pass worth of noise.
    {
        let mut g = Graph::new();
        let gv = generator.bind(&mut g, false);
        let zv = g.constant(z.clone());
        let fake = generator.forward(&mut g, &gv, zv, &mut recorder, false).unwrap();
        let _ = fake;
        let h = Tensor::<f64>::zeros(m, layout.feature_width());
        let hv = classifier.bind(&mut g, false);
        let hx = g.constant(h);
        classifier.soft_label(&mut g, &hv, hx, &mut recorder).unwrap();
    }
    let replay: ReplayNoise<f64> = recorder.into_replay();

    let margin = s.margin;
    let norm_margin = s.norm_margin;
    let mut ff = report.first_failure.take();

    // Critic objective.
    let stats = report.term("critic_wgan_gp");
    {
        let mut eval = |c: &Critic<f64>| {
            let mut g = Graph::new();
            let vars = c.bind(&mut g, true);
            let t = critic_objective(&mut g, c, &vars, &real, &fake, &eps, lambda_pen).unwrap();
            let x_hat = g.constant(fairtab::training::interpolate(&real, &fake, &eps));
            c.forward(&mut g, &vars, x_hat).unwrap();
            if g.min_kink_distance().unwrap_or(f64::INFINITY) < margin {
                return None;
            }
            let gx = c.input_gradient(&mut g, &vars, x_hat).unwrap();
            if min_row_norm(g.value(gx)) < norm_margin {
                return None;
            }
            let grads = g.backward(t.loss).unwrap();
            Some(Point {
                loss: g.value(t.loss).item(),
                grads: vars.vars().iter().map(|&v| grads.wrt(v)).collect(),
                pattern: g.activation_pattern(),
            })
        };
        if !compare(&mut critic, Critic::params_mut, &mut eval, s, stats, &mut ff) {
            report.first_failure = ff;
            return false;
        }
    }

    // Generator objectives: realism only, then with each penalty.
    for (name, variant) in [
        ("generator_realism", None),
        ("generator_fair_sp", Some(Variant::Sp)),
        ("generator_fair_eod", Some(Variant::Eod)),
    ] {
        let stats = report.term(name);
        let mut noise = replay.clone();
        let mut eval = |gen: &Generator<f64>| {
            noise.rewind();
            let mut g = Graph::new();
            let gv = gen.bind(&mut g, true);
            let cv = critic.bind(&mut g, false);
            let hv = classifier.bind(&mut g, false);
            let zv = g.constant(z.clone());
            let fairness = variant.map(|variant| FairnessTerm {
                classifier: &classifier,
                vars: &hv,
                layout: &layout,
                variant,
                lambda_fair,
            });
            let t = generator_objective(&mut g, gen, &gv, &critic, &cv, zv, &mut noise, fairness).unwrap();
            if g.min_kink_distance().unwrap_or(f64::INFINITY) < margin {
                return None;
            }
            let values = g.value(t.fake);
            if variant.is_some()
                && (argmax_margin(values, layout.protected_block()) < margin
                    || argmax_margin(values, layout.label_block()) < margin)
            {
                return None;
            }
            let mut pattern = g.activation_pattern();
            pattern.extend(t.privileged.iter().chain(&t.positive));
            let grads = g.backward(t.loss).unwrap();
            Some(Point {
                loss: g.value(t.loss).item(),
                grads: gv.vars().iter().map(|&v| grads.wrt(v)).collect(),
                pattern,
            })
        };
        if !compare(&mut generator, Generator::params_mut, &mut eval, s, stats, &mut ff) {
            report.first_failure = ff;
            return false;
        }
    }

    // Classifier cross-entropy.
    let stats = report.term("classifier_xent");
    let x = uniform(m, layout.feature_width(), 0.0, 1.0, rng);
    let labels: Vec<bool> = (0..m).map(|i| i % 2 == 0).collect();
    {
        let mut eval = |h: &Classifier<f64>| {
            let mut g = Graph::new();
            let vars = h.bind(&mut g, true);
            let xv = g.constant(x.clone());
            let loss = h.loss(&mut g, &vars, xv, &labels).unwrap();
            if g.min_kink_distance().unwrap_or(f64::INFINITY) < margin {
                return None;
            }
            let grads = g.backward(loss).unwrap();
            Some(Point {
                loss: g.value(loss).item(),
                grads: vars.vars().iter().map(|&v| grads.wrt(v)).collect(),
                pattern: g.activation_pattern(),
            })
        };
        if !compare(&mut classifier, Classifier::params_mut, &mut eval, s, stats, &mut ff) {
            report.first_failure = ff;
            return false;
        }
    }
    report.first_failure = ff;
    true
}
