use fairtab_testkit::gradcheck::{run, Settings};

#[test]
fn all_loss_terms_match_finite_differences() {
    let s = Settings::default();
    let report = run(200, 7, &s);
    for t in &report.terms {
        println!("{:<20} checked {:>6} max err {:.3e} failures {}", t.name, t.checked, t.max_err, t.failures);
    }
    println!("rejected {}", report.rejected);
    assert!(report.passed(), "{:?}", report.first_failure);
}
