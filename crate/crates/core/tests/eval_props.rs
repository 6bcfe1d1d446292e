use fairtab::eval::models::{DecisionTree, Knn};
use fairtab::eval::FeatureMatrix;
use fairtab_testkit::model_oracle::{knn_score, tree_score};
use proptest::prelude::*;

fn instance() -> impl Strategy<Value = (Vec<Vec<f64>>, Vec<bool>, Vec<Vec<f64>>)> {
    (1usize..=3).prop_flat_map(|d| {
        let cell = (0u8..6).prop_map(|v| v as f64 / 5.0);
        let row = prop::collection::vec(cell, d);
        (
            prop::collection::vec(row.clone(), 1..=20),
            prop::collection::vec(any::<bool>(), 20),
            prop::collection::vec(row, 1..=8),
        )
            .prop_map(|(x, y, q)| {
                let n = x.len();
                (x, y[..n].to_vec(), q)
            })
    })
}

fn matrix(rows: &[Vec<f64>]) -> FeatureMatrix {
    FeatureMatrix::new(rows.len(), rows[0].len(), rows.concat()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn knn_matches_full_sort((x, y, q) in instance(), k in 1usize..=6) {
        let got = Knn::fit(&matrix(&x), &y, k).scores(&matrix(&q));
        let want: Vec<f64> = q.iter().map(|p| knn_score(&x, &y, k, p)).collect();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn tree_matches_exhaustive_search((x, y, q) in instance()) {
        let tree = DecisionTree::fit(&matrix(&x), &y);
        let mut probe = q.clone();
        probe.extend(x.iter().cloned());
        let got = tree.scores(&matrix(&probe));
        let want: Vec<f64> = probe.iter().map(|p| tree_score(&x, &y, p)).collect();
        prop_assert_eq!(got, want);
    }
}
