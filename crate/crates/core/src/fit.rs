//! Least-squares fits on log scale.

use serde::Serialize;

/// Fit of `y ~ C exp(-rate x)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ExpFit {
    pub constant: f64,
    pub rate: f64,
    /// Standard error of the rate from the regression residuals.
    pub rate_se: f64,
    pub points: usize,
}

/// Ordinary least squares for `y = a + b x`; returns `(a, b, se_b)`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Option<(f64, f64, f64)> {
    let n = xs.len();
    if n < 2 || ys.len() != n {
        return None;
    }
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let b = sxy / sxx;
    let a = my - b * mx;
    let se = if n > 2 {
        let rss: f64 = xs.iter().zip(ys).map(|(x, y)| (y - a - b * x).powi(2)).sum();
        (rss / (nf - 2.0) / sxx).sqrt()
    } else {
        0.0
    };
    Some((a, b, se))
}

/// Fits `y_k ~ C exp(-rate x_k)` on the points with `y_k > floor`.
pub fn exp_decay_fit(xs: &[f64], ys: &[f64], floor: f64) -> Option<ExpFit> {
    let (fx, fy): (Vec<f64>, Vec<f64>) =
        xs.iter().zip(ys).filter(|(_, y)| **y > floor).map(|(x, y)| (*x, y.ln())).unzip();
    let (a, b, se) = linear_fit(&fx, &fy)?;
    Some(ExpFit { constant: a.exp(), rate: -b, rate_se: se, points: fx.len() })
}

/// Fits on the longest prefix of a sequence indexed `1..=N` whose terms all exceed
/// `100 * f64::EPSILON`; later terms are numerical noise.
pub fn sequence_decay_fit(seq: &[f64]) -> Option<ExpFit> {
    let floor = 100.0 * f64::EPSILON;
    let len = seq.iter().position(|v| *v <= floor).unwrap_or(seq.len());
    let xs: Vec<f64> = (1..=len).map(|k| k as f64).collect();
    exp_decay_fit(&xs, &seq[..len], floor)
}
