use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

const TRAIN_CONFIG: &str = r#"{
  "total_epochs": 3,
  "fair_epochs": 1,
  "batch_size": 64,
  "classifier": {"hidden": [8], "epochs": 2, "batch_size": 64}
}"#;

const EVAL_CONFIG: &str = r#"{"kinds": ["LR", "DT"], "folds": 3}"#;

fn fairtab(args: &[&dyn AsRef<std::ffi::OsStr>]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fairtab"))
        .args(args.iter().map(|a| a.as_ref()))
        .env("FAIRTAB_THREADS", "2")
        .output()
        .expect("spawn fairtab")
}

fn ok(out: Output) -> Output {
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

struct Fixture {
    _dir: tempfile::TempDir,
    root: PathBuf,
}

impl Fixture {
    /// Toy CSV, its prepared directory and the two config files.
    fn new() -> Self {
        let dir = tempfile::tempdir().unwrap();
        let root = dir.path().to_path_buf();
        ok(fairtab(&[&"toy", &"--n", &"240", &"--out", &root.join("toy")]));
        fs::write(root.join("train.json"), TRAIN_CONFIG).unwrap();
        fs::write(root.join("eval.json"), EVAL_CONFIG).unwrap();
        ok(fairtab(&[
            &"prepare",
            &root.join("toy/toy.csv"),
            &"--schema",
            &root.join("toy/schema.json"),
            &"--out",
            &root.join("prep"),
        ]));
        Self { _dir: dir, root }
    }

    fn p(&self, rel: &str) -> PathBuf {
        self.root.join(rel)
    }

    fn train(&self, variant: &str, seed: &str, out: &str) -> Output {
        fairtab(&[
            &"train",
            &self.p("prep"),
            &"--config",
            &self.p("train.json"),
            &"--variant",
            &variant,
            &"--seed",
            &seed,
            &"--out",
            &self.p(out),
        ])
    }
}

#[test]
fn missing_schema_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("t.csv");
    fs::write(&csv, "a,b\n1,2\n").unwrap();
    let out = fairtab(&[&"prepare", &csv, &"--schema", &dir.path().join("nope.json"), &"--out", &dir.path().join("o")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn pipeline_end_to_end() {
    let f = Fixture::new();

    let summary = json(&f.p("prep/summary.json"));
    assert_eq!(summary["rows"], 240);
    let prepared = fs::read(f.p("prep/prepared.csv")).unwrap();
    ok(fairtab(&[
        &"prepare",
        &f.p("prep/prepared.csv"),
        &"--schema",
        &f.p("prep/schema.json"),
        &"--out",
        &f.p("prep2"),
    ]));
    assert_eq!(fs::read(f.p("prep2/prepared.csv")).unwrap(), prepared);

    ok(f.train("none", "7", "none"));
    let manifest = json(&f.p("none/manifest.json"));
    let cfg = &manifest["settings"]["config"];
    assert_eq!(cfg["lambda_fair"], 0.5);
    assert_eq!(cfg["lambda_pen"], 10.0);
    assert_eq!(cfg["n_critic"], 4);
    assert_eq!(manifest["settings"]["fairness_phase_skipped"], true);
    assert_eq!(manifest["seeds"][0], 7);
    assert_eq!(manifest["status"], "ok");
    let history = fs::read_to_string(f.p("none/history.csv")).unwrap();
    assert!(history.starts_with("epoch,batch,critic_w,gen_loss,fair_penalty\n"));

    ok(f.train("sp", "7", "sp_a"));
    ok(f.train("sp", "7", "sp_b"));
    assert_eq!(fs::read(f.p("sp_a/model.ckpt")).unwrap(), fs::read(f.p("sp_b/model.ckpt")).unwrap());
    assert_eq!(json(&f.p("sp_a/manifest.json"))["settings"]["fairness_phase_skipped"], false);

    ok(fairtab(&[&"generate", &f.p("sp_a/model.ckpt"), &"--out", &f.p("gen_sp")]));
    let syn = fs::read_to_string(f.p("gen_sp/synthetic.csv")).unwrap();
    let mut lines = syn.lines();
    assert_eq!(lines.next(), Some("x1,x2,s,y"));
    assert_eq!(lines.count(), 240);
    ok(fairtab(&[&"generate", &f.p("none/model.ckpt"), &"--n", &"50", &"--out", &f.p("gen_none")]));

    let zero = fairtab(&[&"generate", &f.p("none/model.ckpt"), &"--n", &"0", &"--out", &f.p("gen_zero")]);
    assert_eq!(zero.status.code(), Some(2));

    let mut bad = fs::read(f.p("none/model.ckpt")).unwrap();
    bad[8..12].copy_from_slice(&99u32.to_le_bytes());
    fs::write(f.p("bad.ckpt"), bad).unwrap();
    let out = fairtab(&[&"generate", &f.p("bad.ckpt"), &"--out", &f.p("gen_bad")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("version"));

    let bench = |out: &str, synthetic: &[String]| {
        let mut args: Vec<&dyn AsRef<std::ffi::OsStr>> = vec![&"benchmark"];
        let real = f.p("prep/prepared.csv");
        let schema = f.p("prep/schema.json");
        let config = f.p("eval.json");
        let dir = f.p(out);
        args.push(&real);
        for s in synthetic {
            args.push(s);
        }
        args.extend([&"--schema" as &dyn AsRef<_>, &schema, &"--config", &config, &"--out", &dir]);
        ok(fairtab(&args));
        fs::read_to_string(f.p(out).join("metrics.csv")).unwrap()
    };
    let real_only = bench("bench_real", &[]);
    let rows: Vec<&str> = real_only.lines().skip(1).collect();
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| r.split(',').nth(1) == Some("Original")));

    let with_two = bench(
        "bench_all",
        &[
            format!("sp={}", f.p("gen_sp/synthetic.csv").display()),
            format!("none={}", f.p("gen_none/synthetic.csv").display()),
        ],
    );
    let rows: Vec<&str> = with_two.lines().skip(1).collect();
    assert_eq!(rows.len(), 6);
    for kind in ["LR", "DT"] {
        let methods: Vec<&str> = rows
            .iter()
            .filter(|r| r.starts_with(&format!("{kind},")))
            .map(|r| r.split(',').nth(1).unwrap())
            .collect();
        assert_eq!(methods, ["Original", "sp", "none"]);
    }
    let sp = fs::read_to_string(f.p("bench_all/dataset_sp.csv")).unwrap();
    assert_eq!(sp.lines().count(), 4);
}

#[test]
fn unknown_config_keys_are_rejected() {
    let f = Fixture::new();
    fs::write(f.p("train.json"), r#"{"lamda_fair": 1.0}"#).unwrap();
    let out = f.train("sp", "1", "x");
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("lamda_fair"));
}
