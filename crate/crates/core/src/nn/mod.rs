//! Generator, critic and auxiliary classifier.

mod classifier;
mod critic;
mod generator;
mod linear;

pub use classifier::{
    classifier_input, train_classifier, Classifier, ClassifierConfig, ClassifierReport, ClassifierVars,
};
pub use critic::{Critic, CriticVars, CRITIC_SLOPE};
pub use generator::{sample_latent, Generator, GeneratorVars};
pub use linear::{dense, Linear};

use thiserror::Error;

use crate::autodiff::AutodiffError;

/// Gumbel-softmax temperature shared by the generator heads and the
/// classifier soft label.
pub const GUMBEL_TAU: f64 = 0.2;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NnError {
    #[error("input width {found} does not match expected {expected}")]
    WidthMismatch { expected: usize, found: usize },
    #[error("classifier labels contain a single class")]
    SingleClass,
    #[error("{labels} labels for {rows} rows")]
    LabelCount { rows: usize, labels: usize },
    #[error("{0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Autodiff(#[from] AutodiffError),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::autodiff::{Graph, Tensor, ZeroNoise};
    use crate::data::{read_csv, BlockLayout, Schema, Transformer};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn layout() -> BlockLayout {
        let schema = Schema::from_json_str(
            r#"{"columns": [
                {"name": "x", "kind": "continuous", "role": "feature"},
                {"name": "c", "kind": "categorical", "role": "feature"},
                {"name": "s", "kind": "categorical", "role": "protected"},
                {"name": "y", "kind": "categorical", "role": "label"}],
              "privileged_value": "a", "positive_label": "1"}"#,
        )
        .unwrap();
        let csv = "x,c,s,y\n1,p,a,1\n2,q,b,0\n3,r,a,0\n";
        let t = read_csv(csv.as_bytes(), &schema).unwrap().table;
        Transformer::fit(&t, &schema).unwrap().layout
    }

    #[test]
    fn generator_respects_block_map() {
        let layout = layout();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let gen = Generator::<f64>::new(&layout, &mut rng);
        assert_eq!(gen.output_dim(), layout.n_dim);
        for hard in [false, true] {
            let out = gen.sample(17, &mut rng, hard).unwrap();
            assert_eq!(out.shape(), [17, layout.n_dim]);
            for r in 0..17 {
                let row = out.row(r);
                assert!(row[..layout.n_num].iter().all(|&v| v >= 0.0));
                for b in layout.categorical_blocks() {
                    let cells = &row[b.range()];
                    assert!((cells.iter().sum::<f64>() - 1.0).abs() < 1e-12);
                    if hard {
                        assert!(cells.iter().all(|&v| v == 0.0 || v == 1.0));
                    }
                }
            }
        }
    }

    #[test]
    fn generator_rejects_wrong_noise_width() {
        let layout = layout();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let gen = Generator::<f64>::new(&layout, &mut rng);
        let mut g = Graph::new();
        let vars = gen.bind(&mut g, false);
        let z = g.constant(Tensor::zeros(2, layout.n_dim + 1));
        assert!(matches!(
            gen.forward(&mut g, &vars, z, &mut ZeroNoise, false),
            Err(NnError::WidthMismatch { .. })
        ));
    }

    #[test]
    fn zero_critic_scores_zero() {
        let mut c = Critic::<f64>::new(4, &mut ChaCha8Rng::seed_from_u64(0));
        for p in c.params_mut() {
            p.data_mut().iter_mut().for_each(|v| *v = 0.0);
        }
        let x = Tensor::from_fn(5, 4, |r, k| (r * 4 + k) as f64 - 7.0);
        let s = c.scores(&x).unwrap();
        assert_eq!(s.shape(), [5, 1]);
        assert!(s.data().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn identity_critic_is_affine_on_positive_inputs() {
        let n = 3;
        let eye = Tensor::from_fn(n, n, |r, c| if r == c { 1.0 } else { 0.0 });
        let lin = |w: Tensor<f64>, b: Tensor<f64>| Linear { weight: w, bias: b };
        let c = Critic {
            hidden: vec![lin(eye.clone(), Tensor::zeros(1, n)), lin(eye, Tensor::zeros(1, n))],
            activation: crate::autodiff::Activation::LeakyRelu { slope: CRITIC_SLOPE },
            output: lin(Tensor::new(3, 1, vec![1.0, -2.0, 0.5]).unwrap(), Tensor::scalar(0.25)),
        };
        let x = Tensor::new(2, 3, vec![1.0, 2.0, 4.0, 0.5, 0.5, 0.5]).unwrap();
        let s = c.scores(&x).unwrap();
        assert!((s.get(0, 0) - (1.0 - 4.0 + 2.0 + 0.25)).abs() < 1e-15);
        assert!((s.get(1, 0) - (0.5 - 1.0 + 0.25 + 0.25)).abs() < 1e-15);
    }

    #[test]
    fn classifier_width_excludes_label() {
        let layout = layout();
        assert_eq!(layout.feature_width() + layout.label_block().width, layout.n_dim);
        let mut g = Graph::<f64>::new();
        let x = g.constant(Tensor::from_fn(2, layout.n_dim, |r, c| (r * 10 + c) as f64));
        let f = classifier_input(&mut g, x, &layout).unwrap();
        assert_eq!(g.shape(f), [2, layout.feature_width()]);
        let label = layout.label_block().range();
        let expect: Vec<f64> = (0..layout.n_dim)
            .filter(|c| !label.contains(c))
            .map(|c| c as f64)
            .collect();
        assert_eq!(g.value(f).row(0), &expect[..]);
    }

    fn fixed_logit_classifier(gap: f64) -> Classifier<f64> {
        Classifier {
            hidden: vec![],
            output: Linear {
                weight: Tensor::zeros(1, 2),
                bias: Tensor::new(1, 2, vec![0.0, gap]).unwrap(),
            },
        }
    }

    #[test]
    fn soft_label_fixed_points() {
        let mut g = Graph::<f64>::new();
        let h = fixed_logit_classifier(0.0);
        let vars = h.bind(&mut g, false);
        let x = g.constant(Tensor::zeros(3, 1));
        let i = h.soft_label(&mut g, &vars, x, &mut ZeroNoise).unwrap();
        assert!(g.value(i).data().iter().all(|&v| v == 0.5));

        let h = fixed_logit_classifier(10.0);
        let vars = h.bind(&mut g, false);
        let i = h.soft_label(&mut g, &vars, x, &mut ZeroNoise).unwrap();
        let expect = 1.0 / (1.0 + (-50.0f64).exp());
        assert!((g.value(i).get(0, 0) - expect).abs() < 1e-15);
        assert!((g.value(i).get(0, 0) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn soft_label_in_open_interval() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let h = Classifier::<f64>::new(4, &[8, 4], &mut rng);
        let mut g = Graph::new();
        let vars = h.bind(&mut g, false);
        let x = g.constant(sample_latent(64, 4, &mut rng));
        let i = h.soft_label(&mut g, &vars, x, &mut rng).unwrap();
        assert!(g.value(i).data().iter().all(|&v| v > 0.0 && v < 1.0));
    }

    fn blobs(n: usize, rng: &mut ChaCha8Rng) -> (Tensor<f64>, Vec<bool>) {
        let noise = sample_latent::<f64, _>(n, 2, rng);
        let labels: Vec<bool> = (0..n).map(|i| i % 2 == 0).collect();
        let x = Tensor::from_fn(n, 2, |r, c| {
            let centre = if labels[r] { 3.0 } else { -3.0 };
            centre + 0.5 * noise.get(r, c)
        });
        (x, labels)
    }

    #[test]
    fn classifier_separates_blobs() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let (x, y) = blobs(400, &mut rng);
        let cfg = ClassifierConfig {
            epochs: 40,
            batch_size: 32,
            ..Default::default()
        };
        let (_, report) = train_classifier(&x, &y, &cfg, &mut rng).unwrap();
        assert!(report.train_accuracy >= 0.99, "{}", report.train_accuracy);
        let w: Vec<f64> = report
            .epoch_losses
            .chunks(10)
            .map(|c| c.iter().sum::<f64>() / c.len() as f64)
            .collect();
        assert!(w.windows(2).all(|p| p[1] <= p[0]), "{w:?}");
    }

    #[test]
    fn classifier_rejects_single_class() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let x = Tensor::<f64>::zeros(4, 2);
        assert_eq!(
            train_classifier(&x, &[true; 4], &ClassifierConfig::default(), &mut rng).unwrap_err(),
            NnError::SingleClass
        );
    }

    #[test]
    fn soft_label_gradient_reaches_generator() {
        let layout = layout();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let gen = Generator::<f64>::new(&layout, &mut rng);
        let h = Classifier::<f64>::new(layout.feature_width(), &[6], &mut rng);
        let mut g = Graph::new();
        let gv = gen.bind(&mut g, true);
        let hv = h.bind(&mut g, false);
        let z = g.constant(sample_latent(8, gen.noise_dim(), &mut rng));
        let rows = gen.forward(&mut g, &gv, z, &mut rng, false).unwrap();
        let feats = classifier_input(&mut g, rows, &layout).unwrap();
        let i = h.soft_label(&mut g, &hv, feats, &mut rng).unwrap();
        let root = g.mean(i).unwrap();
        let grads = g.backward(root).unwrap();
        let norm: f64 = gv
            .vars()
            .iter()
            .map(|&v| grads.wrt(v).data().iter().map(|x| x * x).sum::<f64>())
            .sum();
        assert!(norm > 0.0);
    }
}
