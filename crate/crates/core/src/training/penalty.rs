//! Batch fairness penalties on the classifier soft label `I`.
//!
//! Group and label bits are constants; gradients reach the generator only
//! through `I`. Groups or cells that are empty in the batch contribute 0.

use crate::autodiff::{AutodiffError, Graph, Tensor, Var};
use crate::scalar::Scalar;

/// Column of weights `1/n₁` on `a` rows and `−1/n₀` on `b` rows, or `None`
/// when either side is empty.
fn contrast<T: Scalar>(a: &[bool], b: &[bool]) -> Option<Tensor<T>> {
    let na = a.iter().filter(|&&x| x).count();
    let nb = b.iter().filter(|&&x| x).count();
    if na == 0 || nb == 0 {
        return None;
    }
    let wa = T::one() / T::from_usize(na)?;
    let wb = T::one() / T::from_usize(nb)?;
    Some(Tensor::from_fn(a.len(), 1, |r, _| {
        if a[r] {
            wa
        } else if b[r] {
            -wb
        } else {
            T::zero()
        }
    }))
}

fn gap<T: Scalar>(g: &mut Graph<T>, i: Var, w: Tensor<T>) -> Result<Var, AutodiffError> {
    let w = g.constant(w);
    let weighted = g.mul(i, w)?;
    let diff = g.sum(weighted)?;
    g.abs(diff)
}

/// `|mean(I | s=0) − mean(I | s=1)|`; `privileged` holds the `s=1` bits.
pub fn sp_penalty<T: Scalar>(g: &mut Graph<T>, i: Var, privileged: &[bool]) -> Result<Var, AutodiffError> {
    check_len(g, i, privileged.len())?;
    let unpriv: Vec<bool> = privileged.iter().map(|&p| !p).collect();
    match contrast(&unpriv, privileged) {
        Some(w) => gap(g, i, w),
        None => Ok(g.constant(Tensor::scalar(T::zero()))),
    }
}

/// `Σ_y |mean(I | s=0, y′=y) − mean(I | s=1, y′=y)|` over non-empty cells.
pub fn eod_penalty<T: Scalar>(
    g: &mut Graph<T>,
    i: Var,
    privileged: &[bool],
    positive: &[bool],
) -> Result<Var, AutodiffError> {
    check_len(g, i, privileged.len())?;
    check_len(g, i, positive.len())?;
    let mut terms = Vec::with_capacity(2);
    for y in [false, true] {
        let cell = |s: bool| -> Vec<bool> {
            privileged
                .iter()
                .zip(positive)
                .map(|(&p, &l)| p == s && l == y)
                .collect()
        };
        if let Some(w) = contrast(&cell(false), &cell(true)) {
            terms.push(gap(g, i, w)?);
        }
    }
    match terms.as_slice() {
        [] => Ok(g.constant(Tensor::scalar(T::zero()))),
        [t] => Ok(*t),
        [a, b] => g.add(*a, *b),
        _ => unreachable!(),
    }
}

fn check_len<T: Scalar>(g: &Graph<T>, i: Var, n: usize) -> Result<(), AutodiffError> {
    let shape = g.shape(i);
    if shape != [n, 1] {
        return Err(AutodiffError::ShapeMismatch {
            op: "fairness_penalty",
            left: shape,
            right: [n, 1],
        });
    }
    Ok(())
}

fn mean_gap(i: &[f64], a: impl Fn(usize) -> bool, b: impl Fn(usize) -> bool) -> Option<f64> {
    let (mut sa, mut na, mut sb, mut nb) = (0.0, 0usize, 0.0, 0usize);
    for (r, &v) in i.iter().enumerate() {
        if a(r) {
            sa += v;
            na += 1;
        } else if b(r) {
            sb += v;
            nb += 1;
        }
    }
    (na > 0 && nb > 0).then(|| (sa / na as f64 - sb / nb as f64).abs())
}

/// Plain-value SP penalty.
pub fn sp_penalty_value(i: &[f64], privileged: &[bool]) -> f64 {
    mean_gap(i, |r| !privileged[r], |r| privileged[r]).unwrap_or(0.0)
}

/// Plain-value EOd penalty.
pub fn eod_penalty_value(i: &[f64], privileged: &[bool], positive: &[bool]) -> f64 {
    [false, true]
        .iter()
        .filter_map(|&y| {
            mean_gap(
                i,
                |r| !privileged[r] && positive[r] == y,
                |r| privileged[r] && positive[r] == y,
            )
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eval_sp(i: &[f64], s: &[bool]) -> f64 {
        let mut g = Graph::<f64>::new();
        let v = g.param(Tensor::new(i.len(), 1, i.to_vec()).unwrap());
        let p = sp_penalty(&mut g, v, s).unwrap();
        g.value(p).item()
    }

    fn eval_eod(i: &[f64], s: &[bool], y: &[bool]) -> f64 {
        let mut g = Graph::<f64>::new();
        let v = g.param(Tensor::new(i.len(), 1, i.to_vec()).unwrap());
        let p = eod_penalty(&mut g, v, s, y).unwrap();
        g.value(p).item()
    }

    #[test]
    fn sp_examples() {
        assert_eq!(eval_sp(&[0.3, 0.3, 0.3], &[true, false, true]), 0.0);
        assert!((eval_sp(&[0.9, 0.1], &[false, true]) - 0.8).abs() < 1e-15);
        assert_eq!(eval_sp(&[0.9, 0.1], &[false, false]), 0.0);
    }

    #[test]
    fn eod_examples() {
        let i = [0.8, 0.2, 0.6, 0.6];
        let s = [false, true, false, true];
        let y = [true, true, false, false];
        assert!((eval_eod(&i, &s, &y) - 0.6).abs() < 1e-15);
        assert_eq!(eval_eod(&[0.4; 4], &s, &y), 0.0);
        // all y = 1: only that term
        let i = [0.9, 0.5, 0.7, 0.1];
        let y1 = [true; 4];
        assert!((eval_eod(&i, &s, &y1) - (0.8 - 0.3f64).abs()).abs() < 1e-15);
    }

    #[test]
    fn graph_and_value_agree() {
        let i = [0.12, 0.8, 0.33, 0.5, 0.91, 0.05];
        let s = [true, false, false, true, true, false];
        let y = [true, true, false, false, true, false];
        assert!((eval_sp(&i, &s) - sp_penalty_value(&i, &s)).abs() < 1e-15);
        assert!((eval_eod(&i, &s, &y) - eod_penalty_value(&i, &s, &y)).abs() < 1e-15);
    }

    #[test]
    fn sp_gradient_is_signed_group_weights() {
        let mut g = Graph::<f64>::new();
        let v = g.param(Tensor::new(3, 1, vec![0.9, 0.7, 0.1]).unwrap());
        let p = sp_penalty(&mut g, v, &[false, false, true]).unwrap();
        let grads = g.backward(p).unwrap();
        assert_eq!(grads.wrt(v).data(), &[0.5, 0.5, -1.0]);
    }

    #[test]
    fn empty_group_gives_constant_zero() {
        let mut g = Graph::<f64>::new();
        let v = g.param(Tensor::new(2, 1, vec![0.9, 0.1]).unwrap());
        let p = sp_penalty(&mut g, v, &[true, true]).unwrap();
        let grads = g.backward(p).unwrap();
        assert_eq!(grads.wrt(v).data(), &[0.0, 0.0]);
    }
}
