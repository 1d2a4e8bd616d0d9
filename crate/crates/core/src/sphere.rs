//! Latitude averaging on spheres and the circle-averaged SU(2) operator, evaluated
//! on harmonic and irreducible subspaces.

use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::{FRAC_PI_4, PI};

use crate::error::{LabError, Result};
use crate::linalg::{spectral_norm, CMat};

/// Eigenvalue of the latitude average `T_delta` on degree-`l` harmonics of `S^n`: the
/// Gegenbauer ratio `C_l^lambda(delta) / C_l^lambda(1)` with `lambda = (n-1)/2`.
pub fn tdelta_eigenvalue(n: u32, l: usize, delta: f64) -> Result<f64> {
    Ok(*tdelta_eigenvalues(n, l, delta)?.last().unwrap())
}

/// Eigenvalues for all degrees `0..=max_degree`.
pub fn tdelta_eigenvalues(n: u32, max_degree: usize, delta: f64) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(LabError::invalid("sphere dimension must be at least 2"));
    }
    if !(-1.0..=1.0).contains(&delta) {
        return Err(LabError::invalid(format!("delta = {delta} outside [-1, 1]")));
    }
    let lambda = (n as f64 - 1.0) / 2.0;
    let mut out = Vec::with_capacity(max_degree + 1);
    out.push(1.0);
    if max_degree >= 1 {
        out.push(delta);
    }
    for k in 1..max_degree {
        let kf = k as f64;
        let next = (2.0 * (kf + lambda) * delta * out[k] - kf * out[k - 1]) / (kf + 2.0 * lambda);
        out.push(next);
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct HarmonicSpectrum {
    pub sphere_dim: u32,
    pub max_degree: usize,
    pub deltas: Vec<f64>,
    /// `eigenvalues[i][l]` for `deltas[i]`.
    pub eigenvalues: Vec<Vec<f64>>,
}

impl HarmonicSpectrum {
    pub fn new(sphere_dim: u32, max_degree: usize, deltas: &[f64]) -> Result<Self> {
        let eigenvalues =
            deltas.iter().map(|d| tdelta_eigenvalues(sphere_dim, max_degree, *d)).collect::<Result<_>>()?;
        Ok(Self { sphere_dim, max_degree, deltas: deltas.to_vec(), eigenvalues })
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct NormGap {
    pub value: f64,
    pub argmax_degree: usize,
    /// Analytic bound on `|eig(l,delta) - eig(l,0)|` for every `l > D`, when available.
    pub tail_bound: Option<f64>,
    /// Largest difference over degrees `(D/2, D]`.
    pub envelope: f64,
}

/// `sup_{l <= D} |eig(l, delta) - eig(l, 0)|`, the norm of `T_delta - T_0` restricted to degrees `<= D`.
pub fn tdelta_norm_gap(n: u32, delta: f64, max_degree: usize) -> Result<NormGap> {
    if max_degree < 1 {
        return Err(LabError::invalid("need at least degree 1"));
    }
    let a = tdelta_eigenvalues(n, max_degree, delta)?;
    let b = tdelta_eigenvalues(n, max_degree, 0.0)?;
    let diffs: Vec<f64> = a.iter().zip(&b).map(|(x, y)| (x - y).abs()).collect();
    let (argmax_degree, value) =
        diffs.iter().copied().enumerate().fold((0, 0.0), |acc, (l, d)| if d > acc.1 { (l, d) } else { acc });
    let envelope = diffs[max_degree / 2 + 1..].iter().copied().fold(0.0, f64::max);
    let s = (1.0 - delta * delta).sqrt();
    let next = (max_degree + 1) as f64;
    let tail_bound = match n {
        // Bernstein: sqrt(sin t) |P_l(cos t)| < sqrt(2 / (pi l)).
        2 if s > 0.0 => Some((2.0 / (PI * next)).sqrt() * (s.powf(-0.5) + 1.0)),
        // C_l^1 = U_l, |U_l(cos t)| <= 1/sin t, normalized by U_l(1) = l + 1.
        3 if s > 0.0 => Some((1.0 / s + 1.0) / (next + 1.0)),
        _ => None,
    };
    Ok(NormGap { value, argmax_degree, tail_bound, envelope })
}

pub type Su2 = [[Complex64; 2]; 2];

/// `(1/sqrt 2) [[e^{-i theta}, -e^{i phi}], [e^{-i phi}, e^{i theta}]]`.
pub fn su2_element(theta: f64, phi: f64) -> Su2 {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    [
        [Complex64::from_polar(r, -theta), -Complex64::from_polar(r, phi)],
        [Complex64::from_polar(r, -phi), Complex64::from_polar(r, theta)],
    ]
}

fn check_su2(g: &Su2) -> Result<()> {
    let det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
    let mut err = (det - 1.0).norm();
    for i in 0..2 {
        for j in 0..2 {
            let dot: Complex64 = (0..2).map(|k| g[k][i].conj() * g[k][j]).sum();
            err = err.max((dot - if i == j { 1.0 } else { 0.0 }).norm());
        }
    }
    if err > 1e-12 {
        return Err(LabError::Internal(format!("matrix is not in SU(2): defect {err}")));
    }
    Ok(())
}

fn factorials(n: usize) -> Vec<f64> {
    let mut f = vec![1.0; n + 1];
    for k in 1..=n {
        f[k] = f[k - 1] * k as f64;
    }
    f
}

/// Spin-`j` matrix (`two_j = 2j`) realized on homogeneous polynomials of degree `2j`
/// with orthonormal basis `u^{2j-i} v^i / sqrt((2j-i)! i!)`, acting by `f(x) -> f(g^T x)`.
pub fn spin_matrix(two_j: usize, g: &Su2) -> CMat {
    let n = two_j;
    let fact = factorials(n);
    let binom = |a: usize, b: usize| fact[a] / (fact[b] * fact[a - b]);
    let pows = |z: Complex64| {
        let mut v = vec![Complex64::new(1.0, 0.0); n + 1];
        for k in 1..=n {
            v[k] = v[k - 1] * z;
        }
        v
    };
    let (p11, p21, p12, p22) = (pows(g[0][0]), pows(g[1][0]), pows(g[0][1]), pows(g[1][1]));
    let mut d = CMat::zeros(n + 1, n + 1);
    // Column for basis monomial u^k v^{n-k}; row for u^r v^{n-r}; stored at index n - degree of u.
    for k in 0..=n {
        for a in 0..=k {
            for b in 0..=n - k {
                let r = a + b;
                let c = binom(k, a) * binom(n - k, b) * (fact[r] * fact[n - r] / (fact[k] * fact[n - k])).sqrt();
                d[(n - r, n - k)] += p11[a] * p21[k - a] * p12[b] * p22[n - k - b] * c;
            }
        }
    }
    d
}

#[derive(Clone, Debug, Serialize)]
pub struct SuTwoBlock {
    pub two_j: usize,
    pub theta: f64,
    pub points: usize,
    #[serde(skip)]
    pub block: CMat,
}

/// Trapezoid average over `phi` of the spin-`j` matrix of `su2_element(theta, phi)`.
pub fn stheta_block(two_j: usize, theta: f64, points: usize) -> Result<SuTwoBlock> {
    if points < 64 {
        return Err(LabError::invalid("need at least 64 quadrature points"));
    }
    let mut block = CMat::zeros(two_j + 1, two_j + 1);
    for k in 0..points {
        let g = su2_element(theta, 2.0 * PI * k as f64 / points as f64);
        check_su2(&g)?;
        block += spin_matrix(two_j, &g);
    }
    block /= Complex64::new(points as f64, 0.0);
    Ok(SuTwoBlock { two_j, theta, points, block })
}

#[derive(Clone, Debug, Serialize)]
pub struct SthetaGap {
    pub theta: f64,
    pub value: f64,
    pub argmax_two_j: usize,
    /// `value / |theta - pi/4|^{1/4}`, or 0 at `theta = pi/4`.
    pub holder_ratio: f64,
}

/// `sup_{j <= Jmax} |block_j(theta) - block_j(pi/4)|`.
pub fn stheta_norm_gap(theta: f64, two_j_max: usize, points: usize) -> Result<SthetaGap> {
    if two_j_max < 1 {
        return Err(LabError::invalid("Jmax must be at least 1/2"));
    }
    let mut best = (0, 0.0);
    for two_j in 0..=two_j_max {
        let a = stheta_block(two_j, theta, points)?.block;
        let b = stheta_block(two_j, FRAC_PI_4, points)?.block;
        let v = spectral_norm(&(a - b));
        if v > best.1 {
            best = (two_j, v);
        }
    }
    let dist = (theta - FRAC_PI_4).abs();
    let holder_ratio = if dist > 0.0 { best.1 / dist.powf(0.25) } else { 0.0 };
    Ok(SthetaGap { theta, value: best.1, argmax_two_j: best.0, holder_ratio })
}

/// Smallest `C` with `gap(theta) <= C |theta - pi/4|^{1/4}` on the given gaps.
pub fn fitted_holder_constant(gaps: &[SthetaGap]) -> f64 {
    gaps.iter().map(|g| g.holder_ratio).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigenvalue_examples() {
        assert_eq!(tdelta_eigenvalue(2, 0, 0.3).unwrap(), 1.0);
        assert!((tdelta_eigenvalue(2, 1, 0.3).unwrap() - 0.3).abs() < 1e-15);
        assert!((tdelta_eigenvalue(2, 2, 0.0).unwrap() + 0.5).abs() < 1e-15);
        assert!((tdelta_eigenvalue(4, 7, 1.0).unwrap() - 1.0).abs() < 1e-12);
        assert!(tdelta_eigenvalue(2, 3, 1.5).is_err());
    }

    #[test]
    fn norm_gap_examples() {
        assert_eq!(tdelta_norm_gap(2, 0.0, 50).unwrap().value, 0.0);
        let g2 = tdelta_norm_gap(2, 0.25, 200).unwrap();
        assert!(g2.value <= 1.0);
        let g3 = tdelta_norm_gap(3, 0.25, 200).unwrap();
        assert!(g3.value <= g2.value + 1e-9, "{} vs {}", g3.value, g2.value);
    }

    #[test]
    fn spin_half_block_closed_form() {
        let theta = 0.7;
        let b = stheta_block(1, theta, 64).unwrap().block;
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((b[(0, 0)] - Complex64::from_polar(r, -theta)).norm() < 1e-12);
        assert!((b[(1, 1)] - Complex64::from_polar(r, theta)).norm() < 1e-12);
        assert!(b[(0, 1)].norm() < 1e-12 && b[(1, 0)].norm() < 1e-12);
        let b0 = stheta_block(0, theta, 64).unwrap().block;
        assert!((b0[(0, 0)] - 1.0).norm() < 1e-12);
    }

    #[test]
    fn spin_matrices_are_unitary_homomorphisms() {
        let g = su2_element(0.4, 1.1);
        let h = su2_element(2.0, -0.3);
        let gh = [
            [g[0][0] * h[0][0] + g[0][1] * h[1][0], g[0][0] * h[0][1] + g[0][1] * h[1][1]],
            [g[1][0] * h[0][0] + g[1][1] * h[1][0], g[1][0] * h[0][1] + g[1][1] * h[1][1]],
        ];
        for two_j in [1, 2, 5, 12, 40] {
            let d = spin_matrix(two_j, &g);
            let id = CMat::identity(two_j + 1, two_j + 1);
            assert!(crate::linalg::max_abs(&(d.adjoint() * &d - &id)) < 1e-9, "2j = {two_j}");
            let prod = spin_matrix(two_j, &g) * spin_matrix(two_j, &h);
            assert!(crate::linalg::max_abs(&(prod - spin_matrix(two_j, &gh))) < 1e-9);
        }
    }

    #[test]
    fn stheta_gap_examples() {
        assert_eq!(stheta_norm_gap(FRAC_PI_4, 6, 64).unwrap().value, 0.0);
        let v = stheta_norm_gap(FRAC_PI_4 + 0.1, 20, 64).unwrap().value;
        assert!(v >= 2f64.sqrt() * 0.05f64.sin() - 1e-12);
        assert!(stheta_block(1, 0.0, 10).is_err());
    }
}
