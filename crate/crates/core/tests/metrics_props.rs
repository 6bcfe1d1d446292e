use fairtab::metrics::{abroca, GroupedPredictions, Metric, MetricsRow};
use fairtab_testkit::metrics_oracle::{brute_metrics, grid_abroca, Row};
use proptest::prelude::*;

fn rows_strategy() -> impl Strategy<Value = Vec<Row>> {
    // scores on a coarse grid so ties are common
    prop::collection::vec(
        (any::<bool>(), any::<bool>(), 0u8..=10, any::<bool>())
            .prop_map(|(y, p, s, g)| (y, p, s as f64 / 10.0, g)),
        1..=12,
    )
}

fn to_gp(rows: &[Row]) -> GroupedPredictions {
    GroupedPredictions::new(
        rows.iter().map(|r| r.0).collect(),
        rows.iter().map(|r| r.1).collect(),
        rows.iter().map(|r| r.2).collect(),
        rows.iter().map(|r| r.3).collect(),
    )
    .unwrap()
}

fn same(a: Metric, b: Option<f64>, tol: f64) -> bool {
    match (a.value(), b) {
        (Some(x), Some(y)) => (x - y).abs() <= tol,
        (None, None) => true,
        _ => false,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn matches_brute_force(rows in rows_strategy()) {
        let m = MetricsRow::compute(&to_gp(&rows));
        let want = brute_metrics(&rows);
        for (k, (got, w)) in m.values()[..8].iter().zip(want).enumerate() {
            prop_assert!(same(*got, w, 1e-12), "metric {k}: {got:?} vs {w:?}");
        }
    }

    #[test]
    fn abroca_matches_grid_integration(rows in rows_strategy()) {
        let m = MetricsRow::compute(&to_gp(&rows));
        prop_assert!(same(m.abroca, grid_abroca(&rows, 2001), 1e-3));
    }

    #[test]
    fn group_swap(rows in rows_strategy()) {
        let gp = to_gp(&rows);
        let a = MetricsRow::compute(&gp);
        let b = MetricsRow::compute(&gp.swap_groups());
        prop_assert_eq!(a.sp, b.sp.map(|v| -v));
        prop_assert_eq!(a.te, b.te.map(|v| -v));
        for (x, y) in [(a.eo, b.eo), (a.pe, b.pe), (a.eod, b.eod), (a.pp, b.pp), (a.acc, b.acc), (a.ba, b.ba)] {
            prop_assert_eq!(x, y);
        }
        prop_assert!(same(a.abroca, b.abroca.value(), 1e-12));
    }

    #[test]
    fn identities_and_signs(rows in rows_strategy()) {
        let m = MetricsRow::compute(&to_gp(&rows));
        if let (Some(eo), Some(pe), Some(eod)) = (m.eo.value(), m.pe.value(), m.eod.value()) {
            prop_assert!((eo + pe - eod).abs() < 1e-15);
        }
        for v in [m.eo, m.eod, m.pp, m.pe, m.abroca].iter().filter_map(|m| m.value()) {
            prop_assert!(v >= 0.0);
        }
        for v in [m.acc, m.ba].iter().filter_map(|m| m.value()) {
            prop_assert!((0.0..=1.0).contains(&v));
        }
    }

    #[test]
    fn abroca_monotone_invariance(rows in rows_strategy(), a in 0.1f64..5.0) {
        let y: Vec<bool> = rows.iter().map(|r| r.0).collect();
        let g: Vec<bool> = rows.iter().map(|r| r.3).collect();
        let s: Vec<f64> = rows.iter().map(|r| r.2).collect();
        let t: Vec<f64> = s.iter().map(|x| x.powf(a) * 0.5 + 0.2).collect();
        let base = abroca(&s, &y, &g);
        prop_assert!(same(base, abroca(&t, &y, &g).value(), 1e-12));
    }
}

#[test]
fn fixture_matches_oracle() {
    let rows: Vec<Row> = vec![
        (true, true, 0.9, true),
        (true, false, 0.4, true),
        (false, false, 0.2, true),
        (false, false, 0.1, true),
        (true, true, 0.8, false),
        (false, true, 0.7, false),
        (false, false, 0.3, false),
        (false, false, 0.2, false),
    ];
    let want = brute_metrics(&rows);
    assert_eq!(want[7], None);
    let m = MetricsRow::compute(&to_gp(&rows));
    assert!(same(m.eod, Some(5.0 / 6.0), 1e-15));
}
