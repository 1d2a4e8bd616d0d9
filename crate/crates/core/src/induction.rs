//! The lattice `SL2(Z)` inside `SL2(R)`: reduction to the standard fundamental domain,
//! the cocycle `g w = (g.w) alpha(g, w)`, Monte Carlo over the domain, pushforward of
//! measures to the lattice and truncation of their tails.
//!
//! A point `w` of the domain is a matrix whose associated upper-half-plane point
//! `w^{-1} . i` lies in `F = {|Re z| <= 1/2, |z| >= 1}`. Points with `Re z = 1/2` and points
//! on the right half of the unit arc are sent to their left representatives. Lattice
//! elements are only determined up to `-I`; they are normalized so that the first nonzero
//! entry is positive.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{LabError, Result};
use crate::fit::linear_fit;

pub type Mat2 = [[f64; 2]; 2];
pub type IMat2 = [[i64; 2]; 2];

pub const IDENTITY: IMat2 = [[1, 0], [0, 1]];

const DOMAIN_TOL: f64 = 1e-10;

pub fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut c = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

pub fn det(a: &Mat2) -> f64 {
    a[0][0] * a[1][1] - a[0][1] * a[1][0]
}

/// Inverse of a determinant-one matrix.
pub fn sl2_inverse(a: &Mat2) -> Mat2 {
    [[a[1][1], -a[0][1]], [-a[1][0], a[0][0]]]
}

pub fn rotation(theta: f64) -> Mat2 {
    let (s, c) = theta.sin_cos();
    [[c, -s], [s, c]]
}

/// `log` of the largest singular value of a determinant-one matrix, i.e. half the
/// hyperbolic distance from `i` to `g . i`.
pub fn length(g: &Mat2) -> f64 {
    let f2: f64 = g.iter().flatten().map(|x| x * x).sum();
    0.5 * (0.5 * f2).max(1.0).acosh()
}

pub fn int_length(g: &IMat2) -> f64 {
    let f2: i128 = g.iter().flatten().map(|&x| x as i128 * x as i128).sum();
    0.5 * (0.5 * f2 as f64).max(1.0).acosh()
}

pub fn int_mul(a: &IMat2, b: &IMat2) -> Result<IMat2> {
    let mut c = [[0i64; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            let v = a[i][0] as i128 * b[0][j] as i128 + a[i][1] as i128 * b[1][j] as i128;
            c[i][j] = i64::try_from(v).map_err(|_| LabError::invalid("lattice element overflows i64"))?;
        }
    }
    Ok(c)
}

pub fn int_inverse(a: &IMat2) -> IMat2 {
    [[a[1][1], -a[0][1]], [-a[1][0], a[0][0]]]
}

pub fn int_det(a: &IMat2) -> i128 {
    a[0][0] as i128 * a[1][1] as i128 - a[0][1] as i128 * a[1][0] as i128
}

/// Representative of `{a, -a}` whose first nonzero entry is positive.
pub fn canonical(a: &IMat2) -> IMat2 {
    let first = a.iter().flatten().copied().find(|&x| x != 0).unwrap_or(0);
    if first < 0 {
        [[-a[0][0], -a[0][1]], [-a[1][0], -a[1][1]]]
    } else {
        *a
    }
}

fn as_f64(a: &IMat2) -> Mat2 {
    [[a[0][0] as f64, a[0][1] as f64], [a[1][0] as f64, a[1][1] as f64]]
}

/// `x a + y b` with error-free products, for integer-valued `a, b` below `2^53`.
fn dot2(x: f64, a: f64, y: f64, b: f64) -> f64 {
    let p = x * a;
    let pe = x.mul_add(a, -p);
    let q = y * b;
    let qe = y.mul_add(b, -q);
    let s = p + q;
    let bp = s - p;
    let se = (p - (s - bp)) + (q - bp);
    s + (se + pe + qe)
}

/// `g a` for an integer matrix `a`, accurate to rounding of the result.
fn mul_int_right(g: &Mat2, a: &IMat2) -> Result<Mat2> {
    const LIMIT: i64 = 1 << 53;
    if a.iter().flatten().any(|x| x.abs() >= LIMIT) {
        return Err(LabError::invalid("lattice element too long for double-precision reconstruction"));
    }
    let af = as_f64(a);
    let mut c = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = dot2(g[i][0], af[0][j], g[i][1], af[1][j]);
        }
    }
    Ok(c)
}

/// Upper-half-plane point `g^{-1} . i`.
pub fn half_plane_point(g: &Mat2) -> (f64, f64) {
    let h = sl2_inverse(g);
    let d = h[1][0] * h[1][0] + h[1][1] * h[1][1];
    ((h[0][0] * h[1][0] + h[0][1] * h[1][1]) / d, det(g) / d)
}

pub fn in_fundamental_domain(x: f64, y: f64) -> bool {
    x.abs() <= 0.5 + DOMAIN_TOL && x * x + y * y >= 1.0 - DOMAIN_TOL && y > 0.0
}

/// Moves `z` into `F` by translations and `z -> -1/z`, returning the final point and the
/// accumulated `delta` with `delta . z = w`.
fn reduce_point(mut x: f64, mut y: f64) -> Result<(f64, f64, IMat2)> {
    let mut delta = IDENTITY;
    for _ in 0..100_000 {
        let mut moved = false;
        if x.abs() > 0.5 {
            let n = x.round();
            if n.abs() >= 9.0e15 {
                return Err(LabError::invalid("half-plane point too far out"));
            }
            x -= n;
            delta = int_mul(&[[1, -(n as i64)], [0, 1]], &delta)?;
            moved = true;
        }
        let r2 = x * x + y * y;
        if r2 < 1.0 - 1e-14 {
            x = -x / r2;
            y /= r2;
            delta = int_mul(&[[0, -1], [1, 0]], &delta)?;
            moved = true;
        }
        if !moved {
            if x > 0.5 - 1e-13 {
                x -= 1.0;
                delta = int_mul(&[[1, -1], [0, 1]], &delta)?;
            }
            let r2 = x * x + y * y;
            if r2 < 1.0 + 1e-13 && x > 1e-13 {
                x = -x / r2;
                y /= r2;
                delta = int_mul(&[[0, -1], [1, 0]], &delta)?;
            }
            return Ok((x, y, delta));
        }
    }
    Err(LabError::NoConvergence("reduction did not terminate".into()))
}

/// A domain element `w` with its half-plane point `w^{-1} . i = x + iy`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SiegelPoint {
    pub omega: Mat2,
    pub x: f64,
    pub y: f64,
}

impl SiegelPoint {
    pub fn new(omega: Mat2) -> Result<Self> {
        if (det(&omega) - 1.0).abs() > 1e-12 * omega.iter().flatten().map(|v| v * v).sum::<f64>().max(1.0) {
            return Err(LabError::invalid(format!("det = {} is not 1", det(&omega))));
        }
        let (x, y) = half_plane_point(&omega);
        if !in_fundamental_domain(x, y) {
            return Err(LabError::region(format!("{x} + {y}i is outside the fundamental domain")));
        }
        Ok(Self { omega, x, y })
    }

    pub fn length(&self) -> f64 {
        length(&self.omega)
    }
}

/// `g = w gamma` with `w` in the domain and `gamma` in `SL2(Z)`.
pub fn reduce_to_domain(g: &Mat2) -> Result<(SiegelPoint, IMat2)> {
    let scale = g.iter().flatten().map(|v| v * v).sum::<f64>().max(1.0);
    if !g.iter().flatten().all(|v| v.is_finite()) || (det(g) - 1.0).abs() > 1e-9 * scale {
        return Err(LabError::invalid(format!("det = {} is not 1", det(g))));
    }
    let mut gamma = IDENTITY;
    let mut omega = *g;
    for _ in 0..8 {
        let (x, y) = half_plane_point(&omega);
        if in_fundamental_domain(x, y) && !(x > 0.5 - 1e-13 || (x * x + y * y < 1.0 + 1e-13 && x > 1e-13)) {
            let gamma = canonical(&gamma);
            let omega = mul_int_right(g, &int_inverse(&gamma))?;
            let (x, y) = half_plane_point(&omega);
            return Ok((SiegelPoint { omega, x, y }, gamma));
        }
        let (_, _, delta) = reduce_point(x, y)?;
        gamma = int_mul(&delta, &gamma)?;
        omega = mul_int_right(g, &int_inverse(&gamma))?;
    }
    let (x, y) = half_plane_point(&omega);
    if in_fundamental_domain(x, y) {
        let gamma = canonical(&gamma);
        let omega = mul_int_right(g, &int_inverse(&gamma))?;
        let (x, y) = half_plane_point(&omega);
        return Ok((SiegelPoint { omega, x, y }, gamma));
    }
    Err(LabError::NoConvergence(format!("reduction stalled at {x} + {y}i")))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CocycleResult {
    pub g_dot_omega: SiegelPoint,
    pub alpha: IMat2,
}

/// `g w = (g . w) alpha(g, w)`.
pub fn cocycle(g: &Mat2, omega: &SiegelPoint) -> Result<CocycleResult> {
    let (p, alpha) = reduce_to_domain(&mat_mul(g, &omega.omega))?;
    Ok(CocycleResult { g_dot_omega: p, alpha })
}

/// Max-entry residual of `g w - (g.w) alpha`, relative to the size of `g w`.
pub fn reconstruction_residual(g: &Mat2, omega: &SiegelPoint, c: &CocycleResult) -> f64 {
    let lhs = mat_mul(g, &omega.omega);
    let rhs = mat_mul(&c.g_dot_omega.omega, &as_f64(&c.alpha));
    let scale = lhs.iter().flatten().fold(1.0f64, |m, v| m.max(v.abs()));
    lhs.iter().flatten().zip(rhs.iter().flatten()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max) / scale
}

/// `k(theta1) diag(e^r, e^{-r}) k(theta2)` with `r` uniform in `[0, max_length]`.
pub fn random_sl2(rng: &mut impl Rng, max_length: f64) -> Mat2 {
    let r = rng.gen::<f64>() * max_length;
    let a = [[r.exp(), 0.0], [0.0, (-r).exp()]];
    mat_mul(&mat_mul(&rotation(rng.gen::<f64>() * 2.0 * PI), &a), &rotation(rng.gen::<f64>() * 2.0 * PI))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DomainSample {
    pub point: SiegelPoint,
    pub rotation: f64,
    pub length: f64,
    pub weight: f64,
}

/// Samples the normalized Haar measure on the domain. With `x = sin(phi)`, `phi` uniform in
/// `[-pi/6, pi/6]`, and `y = sqrt(1 - x^2) / U`, the point `x + iy` has the normalized
/// hyperbolic area of `F`; the rotation angle is uniform. Weights are `1/N`.
pub fn sample_domain(n: usize, seed: u64) -> Result<Vec<DomainSample>> {
    if n == 0 {
        return Err(LabError::invalid("need at least one sample"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w = 1.0 / n as f64;
    let out = (0..n)
        .map(|_| {
            let x = ((rng.gen::<f64>() - 0.5) * PI / 3.0).sin();
            let y = (1.0 - x * x).sqrt() / (1.0 - rng.gen::<f64>());
            let theta = rng.gen::<f64>() * 2.0 * PI;
            let sy = y.sqrt();
            let b = [[1.0 / sy, -x / sy], [0.0, sy]];
            let omega = mat_mul(&rotation(-theta), &b);
            let point = SiegelPoint { omega, x, y };
            DomainSample { point, rotation: theta, length: length(&omega), weight: w }
        })
        .collect();
    Ok(out)
}

/// Fraction of samples with `length > r`.
pub fn tail_fraction(samples: &[DomainSample], r: f64) -> f64 {
    samples.iter().filter(|s| s.length > r).map(|s| s.weight).sum::<f64>()
        / samples.iter().map(|s| s.weight).sum::<f64>()
}

/// Radii for the cusp-tail fit.
pub fn default_radii() -> Vec<f64> {
    (0..=10).map(|k| 1.0 + 0.25 * k as f64).collect()
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DomainStats {
    pub samples: usize,
    pub radii: Vec<f64>,
    pub tail_fractions: Vec<f64>,
    /// Fitted `c` in `Pr[length > R] ~ A e^{-cR}`.
    pub cusp_rate: f64,
    /// Batch-means standard error of `cusp_rate`.
    pub cusp_rate_se: f64,
    pub cusp_constant: f64,
    /// `c / 2`: the largest rate whose Monte Carlo integral has finite variance.
    pub s0: f64,
    /// `int e^{s0 length}` over the normalized domain, with its standard error.
    pub exp_integral: f64,
    pub exp_integral_se: f64,
    /// `e^{s0/2} int e^{s0 length}`.
    pub integral_constant: f64,
}

fn fit_tail(samples: &[DomainSample], radii: &[f64]) -> Option<(f64, f64, Vec<f64>)> {
    let fr: Vec<f64> = radii.iter().map(|&r| tail_fraction(samples, r)).collect();
    let (xs, ys): (Vec<f64>, Vec<f64>) =
        radii.iter().zip(&fr).filter(|(_, f)| **f > 0.0).map(|(r, f)| (*r, f.ln())).unzip();
    let (a, b, _) = linear_fit(&xs, &ys)?;
    Some((-b, a.exp(), fr))
}

pub fn estimate_domain_stats(samples: &[DomainSample], radii: &[f64], batches: usize) -> Result<DomainStats> {
    if batches < 2 || samples.len() < 10 * batches {
        return Err(LabError::invalid("need at least two batches of ten samples"));
    }
    let (rate, constant, fractions) =
        fit_tail(samples, radii).ok_or_else(|| LabError::invalid("no tail mass at the fit radii"))?;
    let size = samples.len() / batches;
    let rates: Vec<f64> = (0..batches)
        .map(|b| fit_tail(&samples[b * size..(b + 1) * size], radii).map(|f| f.0))
        .collect::<Option<_>>()
        .ok_or_else(|| LabError::invalid("a batch has no tail mass; use more samples"))?;
    let mean = rates.iter().sum::<f64>() / batches as f64;
    let var = rates.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / (batches - 1) as f64;
    let s0 = rate / 2.0;
    let vals: Vec<f64> = samples.iter().map(|s| (s0 * s.length).exp()).collect();
    let n = vals.len() as f64;
    let m = vals.iter().sum::<f64>() / n;
    let sd = (vals.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
    Ok(DomainStats {
        samples: samples.len(),
        radii: radii.to_vec(),
        tail_fractions: fractions,
        cusp_rate: rate,
        cusp_rate_se: (var / batches as f64).sqrt(),
        cusp_constant: constant,
        s0,
        exp_integral: m,
        exp_integral_se: sd / n.sqrt(),
        integral_constant: (s0 / 2.0).exp() * m,
    })
}

/// `length(w) - min_gamma length(w gamma)` over lattice elements with entries in `[-3, 3]`.
pub fn length_slack(omega: &SiegelPoint) -> f64 {
    let own = omega.length();
    let mut best = own;
    for a in -3i64..=3 {
        for b in -3i64..=3 {
            for c in -3i64..=3 {
                for d in -3i64..=3 {
                    if a * d - b * c == 1 {
                        best = best.min(length(&mat_mul(&omega.omega, &as_f64(&[[a, b], [c, d]]))));
                    }
                }
            }
        }
    }
    own - best
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct GrowthReport {
    pub s: f64,
    /// `max(0, max(length(alpha) - 2 length(g) - 2 length(w)))`.
    pub kappa: f64,
    /// Largest length slack of the domain over the checked points.
    pub max_slack: f64,
    /// Largest relative residual of `g w = (g.w) alpha`.
    pub reconstruction: f64,
    /// `int e^{s length(alpha(g, .))} / e^{2 s length(g)}` per `g`.
    pub ratios: Vec<f64>,
    pub c_emp: f64,
    /// `e^{s kappa} int e^{2 s length}`, which bounds every ratio sample by sample.
    pub c_pointwise: f64,
    pub pass: bool,
}

/// Checks `length(alpha(g, w)) <= kappa + 2 length(g) + 2 length(w)` and the integrated
/// form over the domain samples, for each `g`.
pub fn cocycle_growth_check(
    g_samples: &[Mat2],
    s: f64,
    domain: &[DomainSample],
    stats: &DomainStats,
) -> Result<GrowthReport> {
    if !(s > 0.0 && s <= stats.s0 / 2.0) {
        return Err(LabError::region(format!("s = {s} must lie in (0, s0/2 = {}]", stats.s0 / 2.0)));
    }
    let total_w: f64 = domain.iter().map(|d| d.weight).sum();
    let mut kappa: f64 = 0.0;
    let mut reconstruction: f64 = 0.0;
    let mut integrals = Vec::with_capacity(g_samples.len());
    let mut excesses = Vec::with_capacity(g_samples.len());
    for g in g_samples {
        let lg = length(g);
        let mut integral = 0.0;
        for d in domain {
            let c = cocycle(g, &d.point)?;
            reconstruction = reconstruction.max(reconstruction_residual(g, &d.point, &c));
            let la = int_length(&c.alpha);
            kappa = kappa.max(la - 2.0 * lg - 2.0 * d.length);
            integral += d.weight * (s * la).exp();
        }
        integrals.push(integral / total_w);
        excesses.push(lg);
    }
    let ratios: Vec<f64> = integrals.iter().zip(&excesses).map(|(i, lg)| i / (2.0 * s * lg).exp()).collect();
    let c_emp = ratios.iter().copied().fold(0.0, f64::max);
    let mean2 = domain.iter().map(|d| d.weight * (2.0 * s * d.length).exp()).sum::<f64>() / total_w;
    let c_pointwise = (s * kappa).exp() * mean2;
    let max_slack = domain.iter().take(200).map(|d| length_slack(&d.point)).fold(0.0, f64::max);
    let pass = kappa <= 2.0 * max_slack + 1e-9 && c_emp <= c_pointwise * (1.0 + 1e-12) && reconstruction <= 1e-9;
    Ok(GrowthReport { s, kappa, max_slack, reconstruction, ratios, c_emp, c_pointwise, pass })
}

/// An empirical probability measure on `SL2(Z)` modulo `-I`.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct LatticeMeasure {
    pub atoms: BTreeMap<IMat2, f64>,
}

impl LatticeMeasure {
    pub fn dirac(g: IMat2) -> Self {
        Self { atoms: BTreeMap::from([(canonical(&g), 1.0)]) }
    }

    pub fn mass(&self) -> f64 {
        self.atoms.values().sum()
    }

    pub fn max_length(&self) -> f64 {
        self.atoms.keys().map(int_length).fold(0.0, f64::max)
    }

    /// `int e^{s length} 1{length >= threshold}`.
    pub fn weighted_tail(&self, s: f64, threshold: f64) -> f64 {
        self.atoms
            .iter()
            .map(|(g, w)| (g, w, int_length(g)))
            .filter(|(_, _, l)| *l >= threshold)
            .map(|(_, w, l)| w * (s * l).exp())
            .sum()
    }

    /// L1 distance `sum |a - b|`.
    pub fn total_variation(&self, other: &LatticeMeasure) -> f64 {
        let mut diff = self.atoms.clone();
        for (g, w) in &other.atoms {
            *diff.entry(*g).or_insert(0.0) -= w;
        }
        diff.values().map(|v| v.abs()).sum()
    }
}

/// Image of `m x dw` under `(g, w) -> alpha(g^{-1}, w)^{-1}`. `m` is a list of weighted
/// elements supported in `{length <= n}`.
pub fn pushforward_mn0(m: &[(Mat2, f64)], n: f64, domain: &[DomainSample]) -> Result<LatticeMeasure> {
    if m.iter().any(|(g, _)| length(g) > n + 1e-9) {
        return Err(LabError::invalid(format!("measure is not supported in the ball of radius {n}")));
    }
    let total_w: f64 = domain.iter().map(|d| d.weight).sum();
    let mut out = LatticeMeasure::default();
    for (g, wg) in m {
        let gi = sl2_inverse(g);
        for d in domain {
            let c = cocycle(&gi, &d.point)?;
            let gamma = canonical(&int_inverse(&c.alpha));
            *out.atoms.entry(gamma).or_insert(0.0) += wg * d.weight / total_w;
        }
    }
    Ok(out)
}

/// Conditions `m0` on the ball `{length <= radius}`; returns the conditional measure and
/// the removed mass.
pub fn truncate_tail(m0: &LatticeMeasure, radius: f64) -> Result<(LatticeMeasure, f64)> {
    let total = m0.mass();
    let inside: BTreeMap<IMat2, f64> =
        m0.atoms.iter().filter(|(g, _)| int_length(g) <= radius + 1e-12).map(|(g, w)| (*g, *w)).collect();
    let kept: f64 = inside.values().sum();
    if inside.is_empty() || kept <= 0.0 {
        return Err(LabError::invalid(format!("no mass in the ball of radius {radius}")));
    }
    let atoms = inside.into_iter().map(|(g, w)| (g, w / kept)).collect();
    Ok((LatticeMeasure { atoms }, (total - kept) / total))
}
