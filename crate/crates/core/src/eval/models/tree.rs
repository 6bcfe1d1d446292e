use std::cmp::Ordering;

use super::FeatureMatrix;

#[derive(Clone, Debug, PartialEq)]
pub enum TreeNode {
    Leaf {
        positives: usize,
        total: usize,
    },
    /// Rows with `x[feature] <= threshold` go to `left`.
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
}

/// CART with Gini impurity, grown until nodes are pure or no split
/// lowers the impurity.
#[derive(Clone, Debug)]
pub struct DecisionTree {
    pub nodes: Vec<TreeNode>,
}

/// Exact fraction `num / den` with `den > 0`.
#[derive(Clone, Copy, Debug)]
pub struct Ratio {
    pub num: u128,
    pub den: u128,
}

impl Ratio {
    pub fn cmp(self, o: Ratio) -> Ordering {
        (self.num * o.den).cmp(&(o.num * self.den))
    }
}

/// Sum over children of `Σ_class count² / size`; maximizing it minimizes
/// the size-weighted Gini impurity.
pub fn purity(children: &[(usize, usize)]) -> Ratio {
    let mut acc = Ratio { num: 0, den: 1 };
    for &(pos, total) in children {
        let (p, n, t) = (pos as u128, (total - pos) as u128, total as u128);
        acc = Ratio {
            num: acc.num * t + (p * p + n * n) * acc.den,
            den: acc.den * t,
        };
    }
    acc
}

/// Cut point strictly below `hi` and at least `lo`.
pub fn midpoint(lo: f64, hi: f64) -> f64 {
    let m = lo + (hi - lo) / 2.0;
    if m < hi {
        m
    } else {
        lo
    }
}

impl DecisionTree {
    pub fn fit(x: &FeatureMatrix, y: &[bool]) -> Self {
        let mut nodes = vec![TreeNode::Leaf { positives: 0, total: 0 }];
        let mut stack = vec![(0usize, (0..x.rows).collect::<Vec<usize>>())];
        while let Some((id, rows)) = stack.pop() {
            let pos = rows.iter().filter(|&&i| y[i]).count();
            let leaf = TreeNode::Leaf {
                positives: pos,
                total: rows.len(),
            };
            if pos == 0 || pos == rows.len() {
                nodes[id] = leaf;
                continue;
            }
            match best_split(x, y, &rows, purity(&[(pos, rows.len())])) {
                None => nodes[id] = leaf,
                Some((feature, threshold)) => {
                    let (l, r): (Vec<usize>, Vec<usize>) =
                        rows.iter().partition(|&&i| x.row(i)[feature] <= threshold);
                    let (left, right) = (nodes.len(), nodes.len() + 1);
                    nodes.push(TreeNode::Leaf { positives: 0, total: 0 });
                    nodes.push(TreeNode::Leaf { positives: 0, total: 0 });
                    nodes[id] = TreeNode::Split {
                        feature,
                        threshold,
                        left,
                        right,
                    };
                    stack.push((right, r));
                    stack.push((left, l));
                }
            }
        }
        Self { nodes }
    }

    pub fn leaf_for(&self, row: &[f64]) -> (usize, usize) {
        let mut id = 0;
        loop {
            match self.nodes[id] {
                TreeNode::Leaf { positives, total } => return (positives, total),
                TreeNode::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => id = if row[feature] <= threshold { left } else { right },
            }
        }
    }

    /// Positive fraction of the leaf each row lands in.
    pub fn scores(&self, x: &FeatureMatrix) -> Vec<f64> {
        (0..x.rows)
            .map(|r| {
                let (p, t) = self.leaf_for(x.row(r));
                p as f64 / t as f64
            })
            .collect()
    }

    pub fn leaves(&self) -> usize {
        self.nodes.iter().filter(|n| matches!(n, TreeNode::Leaf { .. })).count()
    }
}

/// Highest-purity split strictly better than `parent`; ties keep the
/// lowest feature, then the lowest threshold.
fn best_split(x: &FeatureMatrix, y: &[bool], rows: &[usize], parent: Ratio) -> Option<(usize, f64)> {
    let total = rows.len();
    let total_pos = rows.iter().filter(|&&i| y[i]).count();
    let mut best: Option<(Ratio, usize, f64)> = None;
    let mut sorted = rows.to_vec();
    for f in 0..x.cols {
        sorted.sort_by(|&a, &b| x.row(a)[f].total_cmp(&x.row(b)[f]).then(a.cmp(&b)));
        let mut left_pos = 0;
        for k in 0..total - 1 {
            left_pos += usize::from(y[sorted[k]]);
            let (lo, hi) = (x.row(sorted[k])[f], x.row(sorted[k + 1])[f]);
            if lo == hi {
                continue;
            }
            let score = purity(&[(left_pos, k + 1), (total_pos - left_pos, total - k - 1)]);
            let bar = best.map_or(parent, |b| b.0);
            if score.cmp(bar) == Ordering::Greater {
                best = Some((score, f, midpoint(lo, hi)));
            }
        }
    }
    best.map(|(_, f, t)| (f, t))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pure_training_set_is_one_leaf() {
        let x = FeatureMatrix::new(3, 1, vec![0.0, 1.0, 2.0]).unwrap();
        let t = DecisionTree::fit(&x, &[true; 3]);
        assert_eq!(t.nodes.len(), 1);
        assert_eq!(t.scores(&x), vec![1.0; 3]);
    }

    #[test]
    fn xor_needs_two_levels() {
        let x = FeatureMatrix::new(4, 2, vec![0., 0., 0., 1., 1., 0., 1., 1.]).unwrap();
        let y = [false, true, true, false];
        let t = DecisionTree::fit(&x, &y);
        // no single split lowers the impurity, so the root stays a leaf
        assert_eq!(t.leaves(), 1);
        let y = [false, false, true, true];
        let t = DecisionTree::fit(&x, &y);
        assert_eq!(t.nodes[0], TreeNode::Split { feature: 0, threshold: 0.5, left: 1, right: 2 });
    }

    #[test]
    fn duplicate_points_with_mixed_labels_stay_impure() {
        let x = FeatureMatrix::new(3, 1, vec![1.0, 1.0, 2.0]).unwrap();
        let t = DecisionTree::fit(&x, &[true, false, true]);
        assert_eq!(t.scores(&x), vec![0.5, 0.5, 1.0]);
    }

    #[test]
    fn exact_purity() {
        let r = purity(&[(1, 2), (2, 2)]);
        assert_eq!(r.cmp(Ratio { num: 3, den: 1 }), Ordering::Equal);
    }
}
