use super::FeatureMatrix;

/// k-nearest neighbours under Euclidean distance.
#[derive(Clone, Debug)]
pub struct Knn {
    train: FeatureMatrix,
    labels: Vec<bool>,
    k: usize,
}

pub(crate) fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

impl Knn {
    pub fn fit(x: &FeatureMatrix, y: &[bool], k: usize) -> Self {
        Self {
            train: x.clone(),
            labels: y.to_vec(),
            k: k.min(x.rows),
        }
    }

    /// Indices of the k nearest training rows, nearer first; equal
    /// distances are ordered by row index.
    pub fn neighbours(&self, q: &[f64]) -> Vec<usize> {
        let mut best: Vec<(f64, usize)> = Vec::with_capacity(self.k + 1);
        for i in 0..self.train.rows {
            let d = sq_dist(q, self.train.row(i));
            if best.len() == self.k && d >= best[self.k - 1].0 {
                continue;
            }
            let at = best.partition_point(|&(bd, _)| bd <= d);
            best.insert(at, (d, i));
            best.truncate(self.k);
        }
        best.into_iter().map(|(_, i)| i).collect()
    }

    /// Fraction of positive neighbours.
    pub fn scores(&self, x: &FeatureMatrix) -> Vec<f64> {
        (0..x.rows)
            .map(|r| {
                let nb = self.neighbours(x.row(r));
                nb.iter().filter(|&&i| self.labels[i]).count() as f64 / nb.len() as f64
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn four_of_five_votes() {
        let pts = [0.0, 1.0, 2.0, 3.0, 4.0, 10.0, 11.0];
        let x = FeatureMatrix::new(7, 1, pts.to_vec()).unwrap();
        let y = [true, true, false, true, true, false, false];
        let m = Knn::fit(&x, &y, 5);
        let q = FeatureMatrix::new(1, 1, vec![2.0]).unwrap();
        assert_eq!(m.scores(&q), vec![0.8]);
    }

    #[test]
    fn distance_ties_prefer_lower_rows() {
        let x = FeatureMatrix::new(4, 1, vec![1.0, -1.0, 1.0, -1.0]).unwrap();
        let m = Knn::fit(&x, &[true, false, true, false], 2);
        assert_eq!(m.neighbours(&[0.0]), vec![0, 1]);
    }
}
