use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::EvalError;

pub const DEFAULT_FOLDS: usize = 5;

/// Stratified k-fold partition of row indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldPlan {
    pub k: usize,
    pub seed: u64,
    pub n_rows: usize,
    /// Sorted test indices per fold.
    pub test: Vec<Vec<usize>>,
}

impl FoldPlan {
    /// Sorted training indices of fold `f` (every row not in its test fold).
    pub fn train(&self, f: usize) -> Vec<usize> {
        let mut in_test = vec![false; self.n_rows];
        for &i in &self.test[f] {
            in_test[i] = true;
        }
        (0..self.n_rows).filter(|&i| !in_test[i]).collect()
    }
}

/// Shuffle each class with a seeded stream and deal its rows round-robin,
/// continuing the dealer position across classes so fold sizes stay even.
pub fn kfold_split(labels: &[bool], k: usize, seed: u64) -> Result<FoldPlan, EvalError> {
    if k < 2 {
        return Err(EvalError::InvalidConfig(format!("need at least 2 folds, got {k}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut test = vec![Vec::new(); k];
    let mut next = 0;
    for class in [true, false] {
        let mut idx: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == class).collect();
        if idx.len() < k {
            return Err(EvalError::TooFewPerClass {
                class,
                count: idx.len(),
                folds: k,
            });
        }
        idx.shuffle(&mut rng);
        for i in idx {
            test[next].push(i);
            next = (next + 1) % k;
        }
    }
    for t in &mut test {
        t.sort_unstable();
    }
    Ok(FoldPlan {
        k,
        seed,
        n_rows: labels.len(),
        test,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels() -> Vec<bool> {
        (0..100).map(|i| i % 10 < 3).collect()
    }

    #[test]
    fn stratified_partition() {
        let y = labels();
        let plan = kfold_split(&y, 5, 3).unwrap();
        let mut all: Vec<usize> = plan.test.concat();
        all.sort_unstable();
        assert_eq!(all, (0..100).collect::<Vec<_>>());
        for f in 0..5 {
            let pos = plan.test[f].iter().filter(|&&i| y[i]).count();
            assert!((5..=7).contains(&pos), "fold {f} has {pos} positives");
            assert_eq!(plan.train(f).len() + plan.test[f].len(), 100);
        }
    }

    #[test]
    fn seeded() {
        let y = labels();
        assert_eq!(kfold_split(&y, 5, 9).unwrap(), kfold_split(&y, 5, 9).unwrap());
        assert_ne!(kfold_split(&y, 5, 9).unwrap(), kfold_split(&y, 5, 10).unwrap());
    }

    #[test]
    fn rare_class_is_rejected() {
        let mut y = vec![false; 20];
        y[0] = true;
        assert!(matches!(
            kfold_split(&y, 5, 0),
            Err(EvalError::TooFewPerClass { class: true, count: 1, .. })
        ));
    }
}
