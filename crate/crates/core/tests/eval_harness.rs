use std::path::PathBuf;
use std::time::Instant;

use fairtab::data::{load_prepared, Schema};
use fairtab::eval::{benchmark, write_metrics_table, ClassifierKind, EvalSettings};
use fairtab::metrics::{Metric, MetricsRow};

fn data_dir() -> PathBuf {
    std::env::var_os("FAIRTAB_DATA_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data"))
}

#[test]
fn german_original_and_identity_synthetic() {
    let dir = data_dir();
    let schema = Schema::from_path(&dir.join("schemas/german_sex.json")).unwrap();
    let real = load_prepared(&dir.join("german.csv"), &schema).unwrap().table;
    let mut settings = EvalSettings::default();
    settings.params.mlp.epochs = 10;
    let t0 = Instant::now();
    let synth = vec![("copy".to_string(), real.clone())];
    let (report, ev) = benchmark("german", real, schema, &synth, settings.clone()).unwrap();
    eprintln!("benchmark took {:?}", t0.elapsed());

    assert_eq!(report.sources.len(), 2);
    assert_eq!(report.sources[0].method, "Original");
    assert!((report.sources[0].dataset_sp.value().unwrap().abs() - 0.0748).abs() < 0.005);
    assert_eq!(report.sources[0].dataset_sp, report.sources[1].dataset_sp);

    for s in &report.sources {
        assert_eq!(s.results.len(), 4);
        for r in &s.results {
            assert_eq!(r.folds.len(), 5);
            for f in &r.folds {
                let gp = ev.grouped(f.fold, f.predictions.clone(), f.scores.clone()).unwrap();
                assert_eq!(MetricsRow::compute(&gp), f.metrics);
            }
            for (m, v) in r.mean.values().iter().enumerate() {
                if let Metric::Value(v) = v {
                    let want: f64 = r.folds.iter().map(|f| f.metrics.values()[m].value().unwrap()).sum::<f64>() / 5.0;
                    assert!((v - want).abs() < 1e-12);
                }
            }
            let acc = r.mean.acc.value().unwrap();
            assert!(acc > 0.6, "{} {}: {acc}", s.method, r.classifier);
        }
    }
    // training on all rows includes each test fold, so memorizing models do at least as well
    let dt = |i: usize| report.sources[i].results.iter().find(|r| r.classifier == ClassifierKind::Dt).unwrap().mean.acc.value().unwrap();
    assert!(dt(1) >= dt(0));

    let mut a = Vec::new();
    write_metrics_table(&report, &mut a).unwrap();
    let text = String::from_utf8(a).unwrap();
    assert!(text.starts_with("Classifier,Method,Acc,BA,SP,EO,EOd,PP,PE,TE,ABROCA\n"));
    assert_eq!(text.lines().count(), 1 + 4 * 2);

    let schema = Schema::from_path(&dir.join("schemas/german_sex.json")).unwrap();
    let real = load_prepared(&dir.join("german.csv"), &schema).unwrap().table;
    let (again, _) = benchmark("german", real, schema, &synth, settings).unwrap();
    assert_eq!(serde_json::to_string(&again).unwrap(), serde_json::to_string(&report).unwrap());
}

#[test]
fn header_mismatch_is_rejected() {
    let dir = data_dir();
    let schema = Schema::from_path(&dir.join("schemas/german_sex.json")).unwrap();
    let real = load_prepared(&dir.join("german.csv"), &schema).unwrap().table;
    let ev = fairtab::eval::Evaluator::new(real.clone(), schema, EvalSettings::default()).unwrap();
    let mut bad = real;
    bad.header.swap(0, 1);
    assert!(matches!(
        ev.evaluate("bad", Some(&bad)),
        Err(fairtab::eval::EvalError::SchemaMismatch { .. })
    ));
}
