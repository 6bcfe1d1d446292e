//! Brute-force metric definitions written straight from cell enumeration.

/// Per-row tuple `(y_true, y_pred, score, privileged)`.
pub type Row = (bool, bool, f64, bool);

fn count(rows: &[Row], f: impl Fn(&Row) -> bool) -> f64 {
    rows.iter().filter(|r| f(r)).count() as f64
}

fn div(a: f64, b: f64) -> Option<f64> {
    (b != 0.0).then(|| a / b)
}

fn group(rows: &[Row], g: bool) -> Vec<Row> {
    rows.iter().copied().filter(|r| r.3 == g).collect()
}

fn tpr(rows: &[Row]) -> Option<f64> {
    div(count(rows, |r| r.0 && r.1), count(rows, |r| r.0))
}

fn fpr(rows: &[Row]) -> Option<f64> {
    div(count(rows, |r| !r.0 && r.1), count(rows, |r| !r.0))
}

fn tnr(rows: &[Row]) -> Option<f64> {
    div(count(rows, |r| !r.0 && !r.1), count(rows, |r| !r.0))
}

fn ppv(rows: &[Row]) -> Option<f64> {
    div(count(rows, |r| r.0 && r.1), count(rows, |r| r.1))
}

fn te_ratio(rows: &[Row]) -> Option<f64> {
    div(count(rows, |r| r.0 && !r.1), count(rows, |r| !r.0 && r.1))
}

fn gap(rows: &[Row], f: fn(&[Row]) -> Option<f64>, abs: bool) -> Option<f64> {
    let d = f(&group(rows, true))? - f(&group(rows, false))?;
    Some(if abs { d.abs() } else { d })
}

/// `[Acc, BA, SP, EO, EOd, PP, PE, TE]`.
pub fn brute_metrics(rows: &[Row]) -> [Option<f64>; 8] {
    let acc = div(count(rows, |r| r.0 == r.1), rows.len() as f64);
    let ba = tpr(rows).zip(tnr(rows)).map(|(a, b)| (a + b) / 2.0);
    let sp = gap(rows, |g| div(count(g, |r| r.1), g.len() as f64), false);
    let eo = gap(rows, tpr, true);
    let pe = gap(rows, fpr, true);
    let eod = eo.zip(pe).map(|(a, b)| a + b);
    let pp = gap(rows, ppv, true);
    let te = gap(rows, te_ratio, false);
    [acc, ba, sp, eo, eod, pp, pe, te]
}

/// TPR at false-positive rate `t`, reading the curve built from every
/// candidate threshold and interpolating linearly between its points.
fn tpr_at(rows: &[Row], t: f64) -> f64 {
    let pos = count(rows, |r| r.0);
    let neg = count(rows, |r| !r.0);
    let mut thresholds: Vec<f64> = rows.iter().map(|r| r.2).collect();
    thresholds.push(f64::INFINITY);
    thresholds.push(f64::NEG_INFINITY);
    let mut pts: Vec<(f64, f64)> = thresholds
        .iter()
        .map(|&th| {
            (
                count(rows, |r| !r.0 && r.2 >= th) / neg,
                count(rows, |r| r.0 && r.2 >= th) / pos,
            )
        })
        .collect();
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup();
    for w in pts.windows(2) {
        let ((x0, y0), (x1, y1)) = (w[0], w[1]);
        if t >= x0 && t <= x1 && x1 > x0 {
            return y0 + (y1 - y0) * (t - x0) / (x1 - x0);
        }
    }
    pts.iter().filter(|p| p.0 <= t).map(|p| p.1).fold(0.0, f64::max)
}

/// Trapezoid-rule ABROCA on an evenly spaced FPR grid.
pub fn grid_abroca(rows: &[Row], points: usize) -> Option<f64> {
    let (a, b) = (group(rows, true), group(rows, false));
    for g in [&a, &b] {
        if !g.iter().any(|r| r.0) || !g.iter().any(|r| !r.0) {
            return None;
        }
    }
    let h = 1.0 / (points - 1) as f64;
    let f: Vec<f64> = (0..points)
        .map(|i| {
            let t = i as f64 * h;
            (tpr_at(&a, t) - tpr_at(&b, t)).abs()
        })
        .collect();
    Some(h * (f.iter().sum::<f64>() - 0.5 * (f[0] + f[points - 1])))
}
