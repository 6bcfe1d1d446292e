//! Biased toy benchmark: two continuous features, binary `s` and `y` with
//! `P(y=1 | s=a) = 0.7` and `P(y=1 | s=b) = 0.3`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::data::{Cell, RawTable, Schema};

pub const TOY_ROWS: usize = 2000;
pub const P_POS_PRIVILEGED: f64 = 0.7;
pub const P_POS_UNPRIVILEGED: f64 = 0.3;

pub const TOY_SCHEMA: &str = r#"{
  "columns": [
    {"name": "x1", "kind": "continuous", "role": "feature"},
    {"name": "x2", "kind": "continuous", "role": "feature"},
    {"name": "s", "kind": "categorical", "role": "protected"},
    {"name": "y", "kind": "categorical", "role": "label"}
  ],
  "privileged_value": "a",
  "positive_label": "1"
}"#;

pub fn toy_schema() -> Schema {
    Schema::from_json_str(TOY_SCHEMA).expect("built-in schema")
}

/// `s ~ Bernoulli(0.5)` over `{a, b}`, `y | s` as above,
/// `x1 ~ N(2y, 1)`, `x2 ~ N(1.5·[s = a], 1)`.
pub fn biased_toy(rows: usize, seed: u64) -> RawTable {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(rows);
    for _ in 0..rows {
        let privileged = rng.gen_bool(0.5);
        let p = if privileged { P_POS_PRIVILEGED } else { P_POS_UNPRIVILEGED };
        let y = rng.gen_bool(p);
        let n1: f64 = rng.sample(StandardNormal);
        let n2: f64 = rng.sample(StandardNormal);
        let x1 = if y { 2.0 } else { 0.0 } + n1;
        let x2 = if privileged { 1.5 } else { 0.0 } + n2;
        out.push(vec![
            Cell::Real(x1),
            Cell::Real(x2),
            Cell::Category(if privileged { "a" } else { "b" }.into()),
            Cell::Category(if y { "1" } else { "0" }.into()),
        ]);
    }
    RawTable {
        header: ["x1", "x2", "s", "y"].map(String::from).to_vec(),
        rows: out,
    }
}
