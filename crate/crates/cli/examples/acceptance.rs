//! Acceptance runner: one PASS/FAIL line per criterion.
//!
//! ```text
//! cargo run --release -p fairtab-cli --example acceptance -- [--only 1,4] [--extended]
//! ```
//!
//! Data files are read from `FAIRTAB_DATA_DIR`, or `data/` in the workspace.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use fairtab::data::{
    label_bits, load_prepared, privileged_bits, Cell, EncodedMatrix, RawTable,
    Schema, Transformer,
};
use fairtab::metrics::{statistical_parity, GroupedPredictions, MetricsRow};
use fairtab::toy::{biased_toy, toy_schema, TOY_ROWS};
use fairtab::training::{
    sample_synthetic, train, Mode, TrainConfig, TrainedModels, UpdateEvent, UpdateLog, Variant,
};
use fairtab_cli::commands;
use fairtab_testkit::gradcheck;
use fairtab_testkit::metrics_oracle::{brute_metrics, grid_abroca, Row};

const TOY_SEED: u64 = 42;
const SEEDS: [u64; 5] = [1, 2, 3, 4, 5];
const SAMPLE_SEED: u64 = 42;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn data_dir() -> PathBuf {
    std::env::var_os("FAIRTAB_DATA_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data"))
}

fn secs(d: Duration) -> String {
    format!("{:.1}s", d.as_secs_f64())
}

fn c1() -> Verdict {
    let t0 = Instant::now();
    let report = gradcheck::run(200, 1, &gradcheck::Settings::default());
    let el = t0.elapsed();
    let terms: Vec<String> = report
        .terms
        .iter()
        .map(|t| format!("{} {:.1e}", t.name, t.max_err))
        .collect();
    verdict(
        report.passed() && el < Duration::from_secs(60),
        format!(
            "{} configs, max rel err {:.2e} (tol 1e-5) [{}], {} in {}",
            report.trials,
            report.max_err(),
            terms.join(", "),
            report.first_failure.as_deref().unwrap_or("no failures"),
            secs(el)
        ),
    )
}

fn random_rows(rng: &mut ChaCha8Rng) -> Vec<Row> {
    let n = rng.gen_range(1..=12);
    (0..n)
        .map(|_| (rng.gen_bool(0.5), rng.gen_bool(0.5), rng.gen_range(0..=10) as f64 / 10.0, rng.gen_bool(0.5)))
        .collect()
}

fn grouped(rows: &[Row]) -> GroupedPredictions {
    GroupedPredictions::new(
        rows.iter().map(|r| r.0).collect(),
        rows.iter().map(|r| r.1).collect(),
        rows.iter().map(|r| r.2).collect(),
        rows.iter().map(|r| r.3).collect(),
    )
    .expect("valid instance")
}

fn c2() -> Verdict {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut worst_ratio, mut worst_abroca, mut mismatches, mut abroca_defined) = (0.0f64, 0.0f64, 0, 0);
    for _ in 0..1000 {
        let rows = random_rows(&mut rng);
        let m = MetricsRow::compute(&grouped(&rows));
        for (got, want) in m.values()[..8].iter().zip(brute_metrics(&rows)) {
            match (got.value(), want) {
                (Some(a), Some(b)) => worst_ratio = worst_ratio.max((a - b).abs()),
                (None, None) => {}
                _ => mismatches += 1,
            }
        }
        match (m.abroca.value(), grid_abroca(&rows, 2001)) {
            (Some(a), Some(b)) => {
                abroca_defined += 1;
                worst_abroca = worst_abroca.max((a - b).abs());
            }
            (None, None) => {}
            _ => mismatches += 1,
        }
    }
    let el = t0.elapsed();
    verdict(
        mismatches == 0 && worst_ratio <= 1e-12 && worst_abroca <= 1e-3 && el < Duration::from_secs(60),
        format!(
            "1000 instances: max ratio gap {worst_ratio:.1e} (tol 1e-12), max ABROCA gap {worst_abroca:.1e} \
             over {abroca_defined} defined (tol 1e-3), {mismatches} definedness mismatches, {}",
            secs(el)
        ),
    )
}

fn c3() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0f64;
    let mut checked = 0;
    for _ in 0..1000 {
        let m = MetricsRow::compute(&grouped(&random_rows(&mut rng)));
        if let (Some(eo), Some(pe), Some(eod)) = (m.eo.value(), m.pe.value(), m.eod.value()) {
            worst = worst.max((eo + pe - eod).abs());
            checked += 1;
        }
    }
    let table_gap = (0.0221f64 + 0.0041 - 0.0262).abs();
    verdict(
        worst < 1e-15 && table_gap <= 0.0005,
        format!("EOd - (EO + PE) max {worst:.1e} over {checked} instances; 0.0221 + 0.0041 vs 0.0262 gap {table_gap:.4} (tol 0.0005)"),
    )
}

fn dataset_sp(table: &RawTable, schema: &Schema) -> Result<f64, String> {
    let y = label_bits(table, schema).map_err(|e| e.to_string())?;
    let p = privileged_bits(table, schema).map_err(|e| e.to_string())?;
    statistical_parity(&y, &p).value().ok_or_else(|| "an empty group".to_string())
}

fn load(dir: &Path, csv: &str, schema: &str) -> Result<(RawTable, Schema, usize), String> {
    let schema = Schema::from_path(&dir.join("schemas").join(schema)).map_err(|e| e.to_string())?;
    let loaded = load_prepared(&dir.join(csv), &schema).map_err(|e| e.to_string())?;
    Ok((loaded.table, schema, loaded.total_rows))
}

fn c4() -> Verdict {
    let dir = data_dir();
    let run = || -> Result<Verdict, String> {
        let (adult, s, total) = load(&dir, "adult.csv", "adult_gender.json")?;
        let sp_adult = dataset_sp(&adult, &s)?;
        let (german, s, _) = load(&dir, "german.csv", "german_sex.json")?;
        let sp_german = dataset_sp(&german, &s)?;
        let ok = adult.len() == 45_222 && (sp_adult - 0.1989).abs() <= 0.005 && (sp_german - 0.0748).abs() <= 0.005;
        Ok(verdict(
            ok,
            format!(
                "Adult rows {} of {total} (want 45222), SP-gender {sp_adult:.4} (0.1989 +/- 0.005); German SP-sex {sp_german:.4} (0.0748 +/- 0.005)",
                adult.len()
            ),
        ))
    };
    run().unwrap_or_else(|e| verdict(false, format!("data unavailable in {}: {e}", dir.display())))
}

fn round_trip(table: &RawTable, schema: &Schema) -> Result<f64, String> {
    let tr = Transformer::fit(table, schema).map_err(|e| e.to_string())?;
    let enc = tr.transform(table).map_err(|e| e.to_string())?;
    let back = tr.inverse_transform(&enc).map_err(|e| e.to_string())?;
    if back.header != table.header || back.len() != table.len() {
        return Err("shape changed".into());
    }
    let mut worst = 0.0f64;
    for (a, b) in table.rows.iter().zip(&back.rows) {
        for (x, y) in a.iter().zip(b) {
            match (x, y) {
                (Cell::Real(u), Cell::Real(v)) => worst = worst.max((u - v).abs()),
                (Cell::Category(u), Cell::Category(v)) if u == v => {}
                _ => return Err(format!("categorical mismatch {x} vs {y}")),
            }
        }
    }
    Ok(worst)
}

fn random_csv_case() -> (RawTable, Schema) {
    let schema = Schema::from_json_str(
        r#"{"columns": [
            {"name": "a", "kind": "continuous", "role": "feature"},
            {"name": "b", "kind": "categorical", "role": "feature"},
            {"name": "c", "kind": "continuous", "role": "feature"},
            {"name": "g", "kind": "categorical", "role": "protected"},
            {"name": "y", "kind": "categorical", "role": "label"}],
          "privileged_value": "p", "positive_label": "yes"}"#,
    )
    .expect("inline schema");
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut text = String::from("a,b,c,g,y\n");
    for _ in 0..500 {
        text.push_str(&format!(
            "{},{},{},{},{}\n",
            rng.gen_range(-1e6..1e6),
            ["u", "v", "w", "x"][rng.gen_range(0..4)],
            rng.gen_range(0.0..1e-3),
            ["p", "q"][rng.gen_range(0..2)],
            ["yes", "no"][rng.gen_range(0..2)]
        ));
    }
    let table = fairtab::data::read_csv(text.as_bytes(), &schema).expect("generated csv").table;
    (table, schema)
}

fn c5() -> Verdict {
    let dir = data_dir();
    let mut parts = Vec::new();
    let mut pass = true;
    let mut cases: Vec<(String, Result<(RawTable, Schema), String>)> = Vec::new();
    for (name, csv, schema) in [
        ("adult_gender", "adult.csv", "adult_gender.json"),
        ("adult_race", "adult.csv", "adult_race.json"),
        ("german_sex", "german.csv", "german_sex.json"),
    ] {
        cases.push((name.into(), load(&dir, csv, schema).map(|(t, s, _)| (t, s))));
    }
    cases.push(("biased_toy".into(), Ok((biased_toy(TOY_ROWS, TOY_SEED), toy_schema()))));
    cases.push(("random_csv".into(), Ok(random_csv_case())));
    for (name, case) in cases {
        match case.and_then(|(t, s)| round_trip(&t, &s)) {
            Ok(w) => {
                pass &= w <= 1e-9;
                parts.push(format!("{name} {w:.1e}"));
            }
            Err(e) => {
                pass = false;
                parts.push(format!("{name} error: {e}"));
            }
        }
    }
    verdict(pass, format!("max continuous error (tol 1e-9), categoricals exact: {}", parts.join(", ")))
}

fn column_stats(m: &EncodedMatrix, c: usize) -> (f64, f64) {
    let n = m.rows as f64;
    let mu = (0..m.rows).map(|r| m.row(r)[c]).sum::<f64>() / n;
    let var = (0..m.rows).map(|r| (m.row(r)[c] - mu).powi(2)).sum::<f64>() / n;
    (mu, var.sqrt())
}

/// Largest marginal gap over all columns: mean and std gaps for continuous
/// columns, total variation for categorical ones.
fn marginal_gap(real: &EncodedMatrix, synth: &EncodedMatrix) -> f64 {
    let mut worst = 0.0f64;
    for c in 0..real.layout.n_num {
        let (a, b) = (column_stats(real, c), column_stats(synth, c));
        worst = worst.max((a.0 - b.0).abs()).max((a.1 - b.1).abs());
    }
    for blk in real.layout.categorical_blocks() {
        let tv = blk.range().map(|c| (column_stats(real, c).0 - column_stats(synth, c).0).abs()).sum::<f64>() / 2.0;
        worst = worst.max(tv);
    }
    worst
}

struct ToyRun {
    models: TrainedModels<f32>,
    synthetic: RawTable,
    elapsed: Duration,
    log: UpdateLog,
}

fn toy_run(data: &EncodedMatrix, tr: &Transformer, cfg: &TrainConfig) -> Result<ToyRun, String> {
    let t0 = Instant::now();
    let mut log = UpdateLog::default();
    let models = train::<f32, _>(data, cfg, &mut log).map_err(|e| e.to_string())?;
    let elapsed = t0.elapsed();
    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
    let synthetic = sample_synthetic(&models.generator, tr, data.rows, &mut rng).map_err(|e| e.to_string())?;
    Ok(ToyRun {
        models,
        synthetic,
        elapsed,
        log,
    })
}

const TREND_WINDOW: usize = 10;

/// Mean logged penalty over the first and the last `TREND_WINDOW` fair epochs.
fn penalty_trend(models: &TrainedModels<f32>) -> (f64, f64) {
    let mut per_epoch: std::collections::BTreeMap<usize, (f64, usize)> = Default::default();
    for h in &models.history {
        if let Some(p) = h.fair_penalty {
            let e = per_epoch.entry(h.epoch).or_default();
            e.0 += p;
            e.1 += 1;
        }
    }
    let means: Vec<f64> = per_epoch.values().map(|&(s, n)| s / n as f64).collect();
    if means.len() < TREND_WINDOW {
        return (f64::NAN, f64::NAN);
    }
    let avg = |w: &[f64]| w.iter().sum::<f64>() / w.len() as f64;
    (avg(&means[..TREND_WINDOW]), avg(&means[means.len() - TREND_WINDOW..]))
}

struct ToySuite {
    real_sp: f64,
    c6: Vec<(u64, f64, Duration)>,
    c7: Vec<(u64, f64, f64, f64, f64)>,
    c10: Verdict,
}

fn toy_suite(total_epochs: usize) -> Result<ToySuite, String> {
    let schema = toy_schema();
    let table = biased_toy(TOY_ROWS, TOY_SEED);
    let tr = Transformer::fit(&table, &schema).map_err(|e| e.to_string())?;
    let data = tr.transform(&table).map_err(|e| e.to_string())?;
    let real_sp = dataset_sp(&table, &schema)?;
    let mut c6 = Vec::new();
    let mut c7 = Vec::new();
    let mut c10 = None;
    for seed in SEEDS {
        let mut cfg = TrainConfig {
            seed,
            total_epochs,
            ..TrainConfig::default()
        };
        let none = toy_run(&data, &tr, &cfg)?;
        let enc = tr.transform(&none.synthetic).map_err(|e| e.to_string())?;
        c6.push((seed, marginal_gap(&data, &enc), none.elapsed));
        if c10.is_none() {
            c10 = Some(structure(&none.log, &cfg, data.rows));
        }
        cfg.variant = Variant::Sp;
        let sp = toy_run(&data, &tr, &cfg)?;
        let (first, last) = penalty_trend(&sp.models);
        c7.push((
            seed,
            dataset_sp(&sp.synthetic, &schema)?,
            dataset_sp(&none.synthetic, &schema)?,
            first,
            last,
        ));
    }
    Ok(ToySuite {
        real_sp,
        c6,
        c7,
        c10: c10.expect("at least one seed"),
    })
}

fn structure(log: &UpdateLog, cfg: &TrainConfig, rows: usize) -> Verdict {
    let batches = rows.div_ceil(cfg.batch_size);
    let mut critic_run = 0;
    let mut bad_runs = 0;
    let mut gens = 0;
    let mut mode_errors = 0;
    let mut epochs_by_mode = [BTreeSet::new(), BTreeSet::new()];
    for ev in &log.events {
        match *ev {
            UpdateEvent::Critic { .. } => critic_run += 1,
            UpdateEvent::Generator { epoch, mode, .. } => {
                if critic_run != cfg.n_critic {
                    bad_runs += 1;
                }
                critic_run = 0;
                gens += 1;
                let want = if epoch > cfg.total_epochs - cfg.fair_epochs { Mode::Fairness } else { Mode::Accuracy };
                if mode != want {
                    mode_errors += 1;
                }
                epochs_by_mode[usize::from(mode == Mode::Fairness)].insert(epoch);
            }
        }
    }
    let (acc, fair) = (epochs_by_mode[0].len(), epochs_by_mode[1].len());
    let ok = bad_runs == 0
        && critic_run == 0
        && mode_errors == 0
        && gens == batches * cfg.total_epochs
        && acc == 150
        && fair == 50
        && cfg.n_critic == 4;
    verdict(
        ok,
        format!(
            "{gens} generator updates, each preceded by exactly {} critic updates ({bad_runs} violations); \
             {acc} accuracy epochs then {fair} fairness epochs; {mode_errors} mode errors",
            cfg.n_critic
        ),
    )
}

fn c6_verdict(s: &ToySuite) -> Verdict {
    let passing = s.c6.iter().filter(|r| r.1 < 0.1).count();
    let per: Vec<String> = s.c6.iter().map(|(seed, g, t)| format!("seed {seed} gap {g:.3} in {}", secs(*t))).collect();
    let slow = s.c6.iter().any(|r| r.2 > Duration::from_secs(600));
    verdict(
        passing >= 4 && !slow,
        format!("{passing}/5 seeds with max marginal gap < 0.1 (need 4): {}", per.join("; ")),
    )
}

fn c7_verdict(s: &ToySuite) -> Verdict {
    let ok = |r: &(u64, f64, f64, f64, f64)| r.1.abs() < r.2.abs() && r.4 < r.3;
    let passing = s.c7.iter().filter(|r| ok(r)).count();
    let per: Vec<String> = s
        .c7
        .iter()
        .map(|r| {
            format!(
                "seed {}: |SP| sp {:.3} vs none {:.3}, penalty first/last {TREND_WINDOW} epochs {:.4}->{:.4}",
                r.0,
                r.1.abs(),
                r.2.abs(),
                r.3,
                r.4
            )
        })
        .collect();
    verdict(
        passing >= 4,
        format!("real SP {:.3}; {passing}/5 seeds pass (need 4): {}", s.real_sp, per.join("; ")),
    )
}

fn c8() -> Verdict {
    let dir = data_dir();
    let run = || -> Result<Verdict, String> {
        let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
        let t = tmp.path();
        let csv = dir.join("german.csv");
        let schema = dir.join("schemas/german_sex.json");
        let mut passing = 0;
        let mut per = Vec::new();
        let mut slowest = Duration::ZERO;
        for seed in SEEDS {
            let t0 = Instant::now();
            let prep = t.join(format!("prep{seed}"));
            commands::prepare(&csv, &schema, &prep, &[]).map_err(|e| e.to_string())?;
            let mut synth = Vec::new();
            for v in [Variant::Sp, Variant::Eod] {
                let out = t.join(format!("{v}{seed}"));
                commands::train(&prep, None, Some(v), Some(seed), &out, &[]).map_err(|e| e.to_string())?;
                let gen = t.join(format!("gen_{v}{seed}"));
                let p = commands::generate(&out.join(commands::CHECKPOINT), None, SAMPLE_SEED, &gen, &[])
                    .map_err(|e| e.to_string())?;
                synth.push(format!("{v}={}", p.display()));
            }
            let report = commands::benchmark(&csv, &synth, &schema, None, Some(seed), &t.join(format!("bench{seed}")), &[])
                .map_err(|e| e.to_string())?;
            let el = t0.elapsed();
            slowest = slowest.max(el);
            let sp = report.sources[1].dataset_sp.value().unwrap_or(f64::NAN).abs();
            let eod = report.sources[2].dataset_sp.value().unwrap_or(f64::NAN).abs();
            if sp < 0.0748 {
                passing += 1;
            }
            per.push(format!("seed {seed}: |SP| sp {sp:.4}, eod {eod:.4} ({})", secs(el)));
        }
        Ok(verdict(
            passing >= 3 && slowest < Duration::from_secs(1800),
            format!("{passing}/5 seeds with |SP| of the SP variant below 0.0748 (need 3): {}", per.join("; ")),
        ))
    };
    run().unwrap_or_else(|e| verdict(false, format!("pipeline failed: {e}")))
}

fn snapshot(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        let Ok(entries) = std::fs::read_dir(&d) else { continue };
        for e in entries.flatten() {
            let p = e.path();
            if p.is_dir() {
                stack.push(p);
            } else {
                let mut bytes = std::fs::read(&p).unwrap_or_default();
                if p.file_name().is_some_and(|n| n == "manifest.json") {
                    // wall-clock time is the one field that legitimately varies
                    let mut v: serde_json::Value = serde_json::from_slice(&bytes).unwrap_or_default();
                    v["wall_clock_seconds"] = serde_json::Value::Null;
                    bytes = serde_json::to_vec(&v).unwrap_or_default();
                }
                out.push((p.strip_prefix(dir).unwrap_or(&p).display().to_string(), bytes));
            }
        }
    }
    out.sort();
    out
}

fn c9() -> Verdict {
    let run = || -> Result<Verdict, String> {
        let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
        let t = tmp.path();
        let s = |p: &Path| p.display().to_string();
        let pipeline = || -> Result<(), String> {
            let e = |e: fairtab_cli::CliError| e.to_string();
            fairtab_cli::run_args(&["toy", "--out", &s(&t.join("toy"))]).map_err(e)?;
            fairtab_cli::run_args(&[
                "prepare",
                &s(&t.join("toy/toy.csv")),
                "--schema",
                &s(&t.join("toy/schema.json")),
                "--out",
                &s(&t.join("prep")),
            ])
            .map_err(e)?;
            fairtab_cli::run_args(&["train", &s(&t.join("prep")), "--variant", "sp", "--seed", "7", "--out", &s(&t.join("train"))])
                .map_err(e)?;
            fairtab_cli::run_args(&["generate", &s(&t.join("train/model.ckpt")), "--out", &s(&t.join("gen"))]).map_err(e)?;
            fairtab_cli::run_args(&[
                "benchmark",
                &s(&t.join("toy/toy.csv")),
                &format!("sp={}", s(&t.join("gen/synthetic.csv"))),
                "--schema",
                &s(&t.join("toy/schema.json")),
                "--out",
                &s(&t.join("bench")),
            ])
            .map_err(e)
        };
        pipeline()?;
        let first = snapshot(t);
        pipeline()?;
        let second = snapshot(t);
        let differing: Vec<&str> = first
            .iter()
            .zip(&second)
            .filter(|(a, b)| a != b)
            .map(|(a, _)| a.0.as_str())
            .collect();
        Ok(verdict(
            differing.is_empty() && first.len() == second.len(),
            format!(
                "{} files across toy, prepare, train, generate, benchmark compared byte for byte \
                 (manifest wall-clock field excluded); differing: {:?}",
                first.len(),
                differing
            ),
        ))
    };
    run().unwrap_or_else(|e| verdict(false, format!("pipeline failed: {e}")))
}

fn extended(epochs: usize) {
    match toy_suite(epochs) {
        Ok(s) => {
            println!("INFO  extended budget ({epochs} epochs, fair 50), not an acceptance verdict:");
            println!("INFO    criterion 6 reading: {}", c6_verdict(&s).detail);
            println!("INFO    criterion 7 reading: {}", c7_verdict(&s).detail);
        }
        Err(e) => println!("INFO  extended run failed: {e}"),
    }
}

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let only: Option<BTreeSet<u32>> = args
        .iter()
        .position(|a| a == "--only")
        .and_then(|i| args.get(i + 1))
        .map(|v| v.split(',').filter_map(|x| x.trim().parse().ok()).collect());
    let want = |c: u32| only.as_ref().map_or(true, |s| s.contains(&c));
    let names = [
        "gradient correctness",
        "metric oracle equivalence",
        "EOd = EO + PE convention",
        "dataset-level statistics",
        "transform round trip",
        "WGAN sanity on the biased toy",
        "fairness effect on the biased toy",
        "German credit end to end",
        "determinism",
        "training loop structure",
    ];
    let mut failed = 0;
    let mut emit = |c: u32, v: Verdict| {
        println!("{} {:>2} {}: {}", if v.pass { "PASS" } else { "FAIL" }, c, names[c as usize - 1], v.detail);
        if !v.pass {
            failed += 1;
        }
    };
    for (c, f) in [(1, c1 as fn() -> Verdict), (2, c2), (3, c3), (4, c4), (5, c5)] {
        if want(c) {
            emit(c, f());
        }
    }
    let mut c10 = None;
    if want(6) || want(7) || want(10) {
        match toy_suite(TrainConfig::default().total_epochs) {
            Ok(s) => {
                if want(6) {
                    emit(6, c6_verdict(&s));
                }
                if want(7) {
                    emit(7, c7_verdict(&s));
                }
                c10 = Some(s.c10);
            }
            Err(e) => {
                for c in [6, 7] {
                    if want(c) {
                        emit(c, verdict(false, format!("toy training failed: {e}")));
                    }
                }
                c10 = Some(verdict(false, format!("toy training failed: {e}")));
            }
        }
    }
    for (c, f) in [(8, c8 as fn() -> Verdict), (9, c9)] {
        if want(c) {
            emit(c, f());
        }
    }
    if let (true, Some(v)) = (want(10), c10) {
        emit(10, v);
    }
    if args.iter().any(|a| a == "--extended") {
        extended(800);
    }
    std::process::exit(i32::from(failed > 0));
}
