//! ROC curves and the absolute between-ROC area.

use super::Metric;

/// ROC vertices `(fpr, tpr)` from the `+∞` threshold down through every
/// distinct score; rows with tied scores enter together. `None` when a
/// class is absent.
pub fn roc_curve(scores: &[f64], y_true: &[bool]) -> Option<Vec<(f64, f64)>> {
    let pos = y_true.iter().filter(|&&y| y).count();
    let neg = y_true.len() - pos;
    if pos == 0 || neg == 0 {
        return None;
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));
    let mut pts = vec![(0.0, 0.0)];
    let (mut tp, mut fp) = (0usize, 0usize);
    let mut i = 0;
    while i < order.len() {
        let s = scores[order[i]];
        while i < order.len() && scores[order[i]] == s {
            if y_true[order[i]] {
                tp += 1;
            } else {
                fp += 1;
            }
            i += 1;
        }
        pts.push((fp as f64 / neg as f64, tp as f64 / pos as f64));
    }
    Some(pts)
}

/// Left and right limits of a monotone polyline at `x`.
fn limits(curve: &[(f64, f64)], x: f64) -> (f64, f64) {
    let at: Vec<f64> = curve.iter().filter(|p| p.0 == x).map(|p| p.1).collect();
    if !at.is_empty() {
        let lo = at.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = at.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        return (lo, hi);
    }
    let k = curve.iter().position(|p| p.0 > x).expect("x inside [0, 1]");
    let (x0, y0) = curve[k - 1];
    let (x1, y1) = curve[k];
    let y = y0 + (y1 - y0) * (x - x0) / (x1 - x0);
    (y, y)
}

/// Exact `∫₀¹ |a(t) − b(t)| dt` for two piecewise-linear ROC curves.
pub fn between_curve_area(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    let mut xs: Vec<f64> = a.iter().chain(b).map(|p| p.0).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    let mut area = 0.0;
    for w in xs.windows(2) {
        let (x0, x1) = (w[0], w[1]);
        let d0 = limits(a, x0).1 - limits(b, x0).1;
        let d1 = limits(a, x1).0 - limits(b, x1).0;
        let width = x1 - x0;
        area += if d0 * d1 >= 0.0 {
            0.5 * (d0.abs() + d1.abs()) * width
        } else {
            0.5 * (d0 * d0 + d1 * d1) / (d0.abs() + d1.abs()) * width
        };
    }
    area
}

/// ABROCA between the privileged and unprivileged groups.
pub fn abroca(scores: &[f64], y_true: &[bool], privileged: &[bool]) -> Metric {
    let split = |grp: bool| -> (Vec<f64>, Vec<bool>) {
        scores
            .iter()
            .zip(y_true)
            .zip(privileged)
            .filter(|(_, &p)| p == grp)
            .map(|((&s, &y), _)| (s, y))
            .unzip()
    };
    let (sp, yp) = split(true);
    let (su, yu) = split(false);
    match (roc_curve(&sp, &yp), roc_curve(&su, &yu)) {
        (Some(a), Some(b)) => Metric::Value(between_curve_area(&a, &b)),
        _ => Metric::Undefined,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ties_give_a_diagonal() {
        let c = roc_curve(&[0.5; 4], &[true, false, true, false]).unwrap();
        assert_eq!(c, vec![(0.0, 0.0), (1.0, 1.0)]);
    }

    #[test]
    fn step_versus_diagonal_is_half() {
        // privileged: perfectly separated; unprivileged: all scores tied
        let scores = [0.9, 0.8, 0.1, 0.2, 0.5, 0.5, 0.5, 0.5];
        let y = [true, true, false, false, true, false, true, false];
        let p = [true, true, true, true, false, false, false, false];
        assert!((abroca(&scores, &y, &p).value().unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn identical_groups_give_zero() {
        let scores = [0.9, 0.3, 0.6, 0.9, 0.3, 0.6];
        let y = [true, false, true, true, false, true];
        let p = [true, true, true, false, false, false];
        assert_eq!(abroca(&scores, &y, &p), Metric::Value(0.0));
    }

    #[test]
    fn crossing_curves_use_the_split_triangle() {
        let a = [(0.0, 0.0), (1.0, 1.0)];
        let b = [(0.0, 0.0), (0.0, 0.5), (1.0, 0.5), (1.0, 1.0)];
        // |t − 0.5| over [0, 1] = 0.25
        assert!((between_curve_area(&a, &b) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn missing_class_is_undefined() {
        let m = abroca(&[0.1, 0.2, 0.3], &[true, true, false], &[true, true, false]);
        assert_eq!(m, Metric::Undefined);
    }
}
