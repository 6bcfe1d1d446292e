//! Exhaustive-search references for the nearest-neighbour and tree models.

/// Positive fraction among the `k` nearest rows after a full sort by
/// (squared distance, row index).
pub fn knn_score(train: &[Vec<f64>], y: &[bool], k: usize, q: &[f64]) -> f64 {
    let mut d: Vec<(f64, usize)> = train
        .iter()
        .enumerate()
        .map(|(i, r)| (r.iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum(), i))
        .collect();
    d.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let k = k.min(d.len());
    d[..k].iter().filter(|(_, i)| y[*i]).count() as f64 / k as f64
}

/// Size-weighted Gini impurity `Σ n_c − (p_c² + q_c²)/n_c` as an exact
/// fraction.
fn weighted_gini(children: &[(i128, i128)]) -> (i128, i128) {
    let (mut num, mut den) = (0i128, 1i128);
    for &(p, n) in children {
        let t = p + n;
        // add t − (p² + n²)/t
        num = num * t + (t * t - p * p - n * n) * den;
        den *= t;
    }
    (num, den)
}

fn less(a: (i128, i128), b: (i128, i128)) -> bool {
    a.0 * b.1 < b.0 * a.1
}

fn counts(rows: &[usize], y: &[bool]) -> (i128, i128) {
    let p = rows.iter().filter(|&&i| y[i]).count() as i128;
    (p, rows.len() as i128 - p)
}

/// Leaf positive fraction for `q`, re-running the exhaustive split search
/// at every node along its path.
pub fn tree_score(train: &[Vec<f64>], y: &[bool], q: &[f64]) -> f64 {
    let mut rows: Vec<usize> = (0..train.len()).collect();
    loop {
        let (p, n) = counts(&rows, y);
        if p == 0 || n == 0 {
            return p as f64 / (p + n) as f64;
        }
        let mut best = weighted_gini(&[(p, n)]);
        let mut split = None;
        for f in 0..q.len() {
            let mut vals: Vec<f64> = rows.iter().map(|&i| train[i][f]).collect();
            vals.sort_by(f64::total_cmp);
            vals.dedup();
            for w in vals.windows(2) {
                let mid = w[0] + (w[1] - w[0]) / 2.0;
                let t = if mid < w[1] { mid } else { w[0] };
                let left: Vec<usize> = rows.iter().copied().filter(|&i| train[i][f] <= t).collect();
                let right: Vec<usize> = rows.iter().copied().filter(|&i| train[i][f] > t).collect();
                let g = weighted_gini(&[counts(&left, y), counts(&right, y)]);
                if less(g, best) {
                    best = g;
                    split = Some((f, t));
                }
            }
        }
        match split {
            None => return p as f64 / (p + n) as f64,
            Some((f, t)) => rows.retain(|&i| (train[i][f] <= t) == (q[f] <= t)),
        }
    }
}
