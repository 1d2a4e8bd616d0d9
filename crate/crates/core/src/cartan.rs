//! SL(3) over the reals and over Q_p: lengths, Cartan decompositions, the distortion
//! of spheres by `D_alpha k_delta D_alpha`, and the automorphisms `rho` and `u0`.

use nalgebra::{Matrix2, Matrix3, Vector3};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{LabError, Result};

/// Ordered zero-sum triple `a1 >= a2 >= a3`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CartanTriple {
    pub a: [f64; 3],
}

impl CartanTriple {
    pub fn new(a: [f64; 3]) -> Result<Self> {
        if !(a[0] >= a[1] - 1e-10 && a[1] >= a[2] - 1e-10) {
            return Err(LabError::invalid(format!("{a:?} is not ordered")));
        }
        if (a[0] + a[1] + a[2]).abs() > 1e-10 {
            return Err(LabError::invalid(format!("{a:?} does not sum to zero")));
        }
        Ok(Self { a })
    }

    /// `max(a1, -a3)`, the length of `exp-diag(a)`.
    pub fn length(&self) -> f64 {
        self.a[0].max(-self.a[2])
    }

    pub fn exp_diag(&self) -> Matrix3<f64> {
        exp_diag(self.a)
    }
}

/// Integer triple for the p-adic decomposition, `g in K diag(p^{-a1}, p^{-a2}, p^{-a3}) K`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct IntCartanTriple {
    pub a: [i64; 3],
}

impl IntCartanTriple {
    pub fn length_exponent(&self) -> i64 {
        self.a[0].max(-self.a[2])
    }
}

pub fn exp_diag(a: [f64; 3]) -> Matrix3<f64> {
    Matrix3::from_diagonal(&Vector3::new(a[0].exp(), a[1].exp(), a[2].exp()))
}

/// `D_alpha = diag(e^{2 alpha}, e^{-alpha}, e^{-alpha})`.
pub fn d_alpha(alpha: f64) -> Matrix3<f64> {
    exp_diag([2.0 * alpha, -alpha, -alpha])
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RealGroupElement {
    m: Matrix3<f64>,
}

impl RealGroupElement {
    pub fn new(m: Matrix3<f64>) -> Result<Self> {
        if m.iter().any(|x| !x.is_finite()) {
            return Err(LabError::invalid("non-finite entry"));
        }
        let scale = m.norm().powi(3).max(1.0);
        if (m.determinant() - 1.0).abs() > 1e-12 * scale {
            return Err(LabError::invalid(format!("determinant {} is not 1", m.determinant())));
        }
        Ok(Self { m })
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.m
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self { m: self.m * other.m }
    }

    pub fn inverse(&self) -> Self {
        Self { m: self.m.try_inverse().expect("det 1") }
    }

    /// `max(log |g|, log |g^{-1}|)` for the operator 2-norm.
    pub fn length(&self) -> f64 {
        let s = self.m.singular_values();
        s.max().ln().max(-s.min().ln())
    }

    pub fn in_k(&self) -> bool {
        is_rotation(&self.m, 1e-9)
    }
}

pub fn is_rotation(m: &Matrix3<f64>, tol: f64) -> bool {
    (m.transpose() * m - Matrix3::identity()).amax() <= tol && (m.determinant() - 1.0).abs() <= tol
}

/// Rotation with block pattern `[[*,*,0],[*,*,0],[0,0,*]]`.
pub fn in_u_tilde(m: &Matrix3<f64>, tol: f64) -> bool {
    is_rotation(m, tol) && [m[(0, 2)], m[(1, 2)], m[(2, 0)], m[(2, 1)]].iter().all(|x| x.abs() <= tol)
}

/// Rotation with block pattern `[[*,0,0],[0,*,*],[0,*,*]]`.
pub fn in_u(m: &Matrix3<f64>, tol: f64) -> bool {
    is_rotation(m, tol) && [m[(0, 1)], m[(0, 2)], m[(1, 0)], m[(2, 0)]].iter().all(|x| x.abs() <= tol)
}

#[derive(Clone, Copy, Debug)]
pub struct RealKak {
    pub k1: Matrix3<f64>,
    pub a: CartanTriple,
    pub k2: Matrix3<f64>,
}

impl RealKak {
    pub fn reconstruct(&self) -> Matrix3<f64> {
        self.k1 * self.a.exp_diag() * self.k2
    }
}

/// `g = k1 exp-diag(a) k2` from the singular value decomposition, with both orthogonal
/// factors repaired to determinant 1 by a common `diag(1,1,-1)`.
pub fn kak_real(g: &RealGroupElement) -> RealKak {
    let svd = g.m.svd(true, true);
    let (u, vt) = (svd.u.unwrap(), svd.v_t.unwrap());
    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| svd.singular_values[j].partial_cmp(&svd.singular_values[i]).unwrap());
    let perm = Matrix3::from_fn(|i, j| if order[j] == i { 1.0 } else { 0.0 });
    let mut k1 = u * perm;
    let mut k2 = perm.transpose() * vt;
    if k1.determinant() < 0.0 {
        let flip = Matrix3::from_diagonal(&Vector3::new(1.0, 1.0, -1.0));
        k1 *= flip;
        k2 = flip * k2;
    }
    let mut a = order.map(|i| svd.singular_values[i].ln());
    let mean = (a[0] + a[1] + a[2]) / 3.0;
    a.iter_mut().for_each(|x| *x -= mean);
    RealKak { k1, a: CartanTriple { a }, k2 }
}

/// `k_delta = [[delta, -sqrt(1-delta^2), 0], [sqrt(1-delta^2), delta, 0], [0, 0, 1]]`.
pub fn k_delta_real(delta: f64) -> Result<RealGroupElement> {
    if !(0.0..=1.0).contains(&delta) {
        return Err(LabError::invalid(format!("delta = {delta} outside [0, 1]")));
    }
    let s = (1.0 - delta * delta).sqrt();
    RealGroupElement::new(Matrix3::new(delta, -s, 0.0, s, delta, 0.0, 0.0, 0.0, 1.0))
}

/// `J (g^{-1})^T J^{-1}` with `J` the antidiagonal permutation.
pub fn cartan_automorphism(g: &RealGroupElement) -> RealGroupElement {
    let j = Matrix3::new(0.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 0.0);
    RealGroupElement { m: j * g.inverse().m.transpose() * j }
}

fn top_singular_log(m: &Matrix2<f64>) -> f64 {
    m.singular_values().max().ln()
}

/// `log |D_alpha k_delta D_alpha|`.
pub fn distortion_log_norm(alpha: f64, delta: f64) -> Result<f64> {
    let g = d_alpha(alpha) * k_delta_real(delta)?.m * d_alpha(alpha);
    Ok(top_singular_log(&g.fixed_view::<2, 2>(0, 0).into_owned()).max(-2.0 * alpha))
}

#[derive(Clone, Copy, Debug)]
pub struct SphereDistortion {
    pub alpha: f64,
    pub r: f64,
    pub delta: f64,
    pub u: Matrix3<f64>,
    pub u2: Matrix3<f64>,
    /// `|log |D_alpha k_delta D_alpha| - r|`.
    pub residual: f64,
    /// `|u exp-diag(r, 2 alpha - r, -2 alpha) u2 - g| / |g|`.
    pub reconstruction_residual: f64,
}

/// Finds `delta` with `log |D_alpha k_delta D_alpha| = r` by bisection (the map is
/// increasing from `alpha` at 0 to `4 alpha` at 1), then splits the upper 2x2 block.
pub fn solve_sphere_distortion(alpha: f64, r: f64) -> Result<SphereDistortion> {
    if !(alpha > 0.0) {
        return Err(LabError::invalid("alpha must be positive"));
    }
    if r < alpha || r > 4.0 * alpha {
        return Err(LabError::invalid(format!("r = {r} outside [{alpha}, {}]", 4.0 * alpha)));
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let mut delta = 0.5;
    for _ in 0..200 {
        delta = 0.5 * (lo + hi);
        let f = distortion_log_norm(alpha, delta)?;
        if (f - r).abs() <= 1e-13 || hi - lo <= 1e-17 {
            break;
        }
        if f < r {
            lo = delta;
        } else {
            hi = delta;
        }
    }
    for cand in [0.0, 1.0] {
        if (distortion_log_norm(alpha, cand)? - r).abs() < (distortion_log_norm(alpha, delta)? - r).abs() {
            delta = cand;
        }
    }
    let residual = (distortion_log_norm(alpha, delta)? - r).abs();
    let g = d_alpha(alpha) * k_delta_real(delta)?.m * d_alpha(alpha);
    let block: Matrix2<f64> = g.fixed_view::<2, 2>(0, 0).into_owned();
    let svd = block.svd(true, true);
    let (mut bu, mut bvt) = (svd.u.unwrap(), svd.v_t.unwrap());
    if svd.singular_values[0] < svd.singular_values[1] {
        let swap = Matrix2::new(0.0, 1.0, 1.0, 0.0);
        bu *= swap;
        bvt = swap * bvt;
    }
    let embed = |b: &Matrix2<f64>| {
        let mut m = Matrix3::zeros();
        m.fixed_view_mut::<2, 2>(0, 0).copy_from(b);
        m[(2, 2)] = b.determinant().signum();
        m
    };
    let (u, u2) = (embed(&bu), embed(&bvt));
    let target = exp_diag([r, 2.0 * alpha - r, -2.0 * alpha]);
    let reconstruction_residual = (u * target * u2 - g).norm() / g.norm();
    Ok(SphereDistortion { alpha, r, delta, u, u2, residual, reconstruction_residual })
}

// ---------------------------------------------------------------- p-adic

pub type Q = BigRational;
pub type QMat = [[Q; 3]; 3];

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// `p^k` as an exact rational, `k` of either sign.
pub fn p_pow(p: u64, k: i64) -> Q {
    let base = BigInt::from(p).pow(k.unsigned_abs() as u32);
    if k >= 0 {
        Q::from_integer(base)
    } else {
        Q::new(BigInt::one(), base)
    }
}

fn int_valuation(n: &BigInt, p: &BigInt) -> i64 {
    let mut v = 0;
    let mut x = n.abs();
    loop {
        let (d, r) = x.div_rem(p);
        if !r.is_zero() {
            return v;
        }
        x = d;
        v += 1;
    }
}

/// `p`-adic valuation; `None` for zero.
pub fn valuation(x: &Q, p: u64) -> Option<i64> {
    if x.is_zero() {
        return None;
    }
    let pb = BigInt::from(p);
    Some(int_valuation(x.numer(), &pb) - int_valuation(x.denom(), &pb))
}

fn qmat_identity() -> QMat {
    std::array::from_fn(|i| std::array::from_fn(|j| if i == j { Q::one() } else { Q::zero() }))
}

pub fn qmat_mul(a: &QMat, b: &QMat) -> QMat {
    std::array::from_fn(|i| std::array::from_fn(|j| (0..3).fold(Q::zero(), |s, k| s + &a[i][k] * &b[k][j])))
}

pub fn qmat_det(a: &QMat) -> Q {
    &a[0][0] * (&a[1][1] * &a[2][2] - &a[1][2] * &a[2][1]) - &a[0][1] * (&a[1][0] * &a[2][2] - &a[1][2] * &a[2][0])
        + &a[0][2] * (&a[1][0] * &a[2][1] - &a[1][1] * &a[2][0])
}

fn qmat_adjugate(a: &QMat) -> QMat {
    let c = |i: usize, j: usize| {
        let r: Vec<usize> = (0..3).filter(|&x| x != i).collect();
        let s: Vec<usize> = (0..3).filter(|&x| x != j).collect();
        let minor = &a[r[0]][s[0]] * &a[r[1]][s[1]] - &a[r[0]][s[1]] * &a[r[1]][s[0]];
        if (i + j) % 2 == 0 {
            minor
        } else {
            -minor
        }
    };
    std::array::from_fn(|i| std::array::from_fn(|j| c(j, i)))
}

pub fn qmat_diag(d: [Q; 3]) -> QMat {
    let [a, b, c] = d;
    [[a, Q::zero(), Q::zero()], [Q::zero(), b, Q::zero()], [Q::zero(), Q::zero(), c]]
}

#[derive(Clone, Debug, PartialEq)]
pub struct PAdicGroupElement {
    p: u64,
    m: QMat,
}

impl PAdicGroupElement {
    pub fn new(p: u64, m: QMat) -> Result<Self> {
        if !crate::residue_ring::is_prime(p) {
            return Err(LabError::invalid(format!("{p} is not prime")));
        }
        if qmat_det(&m) != Q::one() {
            return Err(LabError::invalid("determinant is not exactly 1"));
        }
        Ok(Self { p, m })
    }

    pub fn from_ints(p: u64, m: [[i64; 3]; 3]) -> Result<Self> {
        Self::new(p, m.map(|row| row.map(q)))
    }

    pub fn identity(p: u64) -> Self {
        Self { p, m: qmat_identity() }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn matrix(&self) -> &QMat {
        &self.m
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.p != other.p {
            return Err(LabError::invalid("elements over different primes"));
        }
        Ok(Self { p: self.p, m: qmat_mul(&self.m, &other.m) })
    }

    pub fn inverse(&self) -> Self {
        Self { p: self.p, m: qmat_adjugate(&self.m) }
    }

    /// Smallest entry valuation, so that `|g| = p^{-min_valuation}`.
    pub fn min_valuation(&self) -> i64 {
        self.m.iter().flatten().filter_map(|x| valuation(x, self.p)).min().expect("nonzero matrix")
    }

    /// `l(g) / log p = max(-v_min(g), -v_min(g^{-1}))`.
    pub fn length_exponent(&self) -> i64 {
        (-self.min_valuation()).max(-self.inverse().min_valuation())
    }

    pub fn length(&self) -> f64 {
        self.length_exponent() as f64 * (self.p as f64).ln()
    }

    /// Membership in `SL3(Z_p)`.
    pub fn in_k(&self) -> bool {
        self.min_valuation() >= 0
    }
}

/// Diagonalization over the local ring `Z_(p)`: `left g right = diag(u_i p^{e_i})` with
/// `left, right` in `GL3(Z_(p))` and `e_1 <= e_2 <= e_3`.
#[derive(Clone, Debug)]
pub struct LocalSmith {
    pub exponents: [i64; 3],
    pub left: QMat,
    pub diag: QMat,
    pub right: QMat,
}

pub fn local_smith(g: &PAdicGroupElement) -> LocalSmith {
    let p = g.p;
    let mut a = g.m.clone();
    let mut left = qmat_identity();
    let mut right = qmat_identity();
    let mut exponents = [0i64; 3];
    for k in 0..3 {
        let mut best: Option<(i64, usize, usize)> = None;
        for i in k..3 {
            for j in k..3 {
                if let Some(v) = valuation(&a[i][j], p) {
                    if best.map_or(true, |b| v < b.0) {
                        best = Some((v, i, j));
                    }
                }
            }
        }
        let (v, i, j) = best.expect("invertible matrix has a pivot");
        a.swap(k, i);
        left.swap(k, i);
        for row in a.iter_mut() {
            row.swap(k, j);
        }
        for row in right.iter_mut() {
            row.swap(k, j);
        }
        exponents[k] = v;
        let pivot = a[k][k].clone();
        for i in k + 1..3 {
            let f = &a[i][k] / &pivot;
            if f.is_zero() {
                continue;
            }
            for c in 0..3 {
                let t = &f * &a[k][c];
                a[i][c] -= t;
                let t = &f * &left[k][c];
                left[i][c] -= t;
            }
        }
        for j in k + 1..3 {
            let f = &a[k][j] / &pivot;
            if f.is_zero() {
                continue;
            }
            for r in 0..3 {
                let t = &f * &a[r][k];
                a[r][j] -= t;
                let t = &f * &right[r][k];
                right[r][j] -= t;
            }
        }
    }
    LocalSmith { exponents, left, diag: a, right }
}

/// Cartan triple of `g = k1 diag(p^{-a1}, p^{-a2}, p^{-a3}) k2`, `k_i in SL3(Z_p)`.
pub fn kak_padic(g: &PAdicGroupElement) -> IntCartanTriple {
    let e = local_smith(g).exponents;
    IntCartanTriple { a: [-e[0], -e[1], -e[2]] }
}

/// `[[delta, -1, 0], [1, 0, 0], [0, 0, 1]]` for `delta` in `Z_p`.
pub fn k_delta_padic(p: u64, delta: &Q) -> Result<PAdicGroupElement> {
    if valuation(delta, p).is_some_and(|v| v < 0) {
        return Err(LabError::invalid("delta must be a p-adic integer"));
    }
    let m = [[delta.clone(), q(-1), q(0)], [q(1), q(0), q(0)], [q(0), q(0), q(1)]];
    PAdicGroupElement::new(p, m)
}

/// `diag(p^{-2 alpha}, p^alpha, p^alpha)`, the p-adic `D_alpha`.
pub fn d_alpha_padic(p: u64, alpha: i64) -> PAdicGroupElement {
    PAdicGroupElement { p, m: qmat_diag([p_pow(p, -2 * alpha), p_pow(p, alpha), p_pow(p, alpha)]) }
}

#[derive(Clone, Debug, Serialize)]
pub struct PAdicDistortion {
    pub p: u64,
    pub alpha: i64,
    pub r: i64,
    /// Valuation of `delta = p^{4 alpha - r}`.
    pub delta_valuation: i64,
    pub triple: IntCartanTriple,
    pub expected: IntCartanTriple,
    pub pass: bool,
}

pub fn padic_sphere_distortion(p: u64, alpha: i64, r: i64) -> Result<PAdicDistortion> {
    if alpha < 0 || r < alpha || r > 4 * alpha {
        return Err(LabError::invalid(format!("need 0 <= alpha <= r <= 4 alpha, got alpha={alpha}, r={r}")));
    }
    let dv = 4 * alpha - r;
    let d = d_alpha_padic(p, alpha);
    let g = d.mul(&k_delta_padic(p, &p_pow(p, dv))?)?.mul(&d)?;
    let triple = kak_padic(&g);
    let expected = IntCartanTriple { a: [r, 2 * alpha - r, -2 * alpha] };
    Ok(PAdicDistortion { p, alpha, r, delta_valuation: dv, triple, expected, pass: triple == expected })
}

/// `diag(p, 1, 1) g diag(1/p, 1, 1)`.
pub fn u0_automorphism(g: &PAdicGroupElement) -> PAdicGroupElement {
    let p = g.p;
    let l = qmat_diag([p_pow(p, 1), q(1), q(1)]);
    let r = qmat_diag([p_pow(p, -1), q(1), q(1)]);
    PAdicGroupElement { p, m: qmat_mul(&qmat_mul(&l, &g.m), &r) }
}

pub fn cartan_automorphism_padic(g: &PAdicGroupElement) -> PAdicGroupElement {
    let inv = g.inverse().m;
    PAdicGroupElement { p: g.p, m: std::array::from_fn(|i| std::array::from_fn(|j| inv[2 - j][2 - i].clone())) }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_lengths() {
        let id = RealGroupElement::new(Matrix3::identity()).unwrap();
        assert_eq!(id.length(), 0.0);
        let d = RealGroupElement::new(d_alpha(0.7)).unwrap();
        assert!((d.length() - 1.4).abs() < 1e-12);
        assert!(RealGroupElement::new(Matrix3::identity() * 2.0).is_err());
    }

    #[test]
    fn kak_of_diagonal() {
        let g = RealGroupElement::new(exp_diag([2.0, 0.0, -2.0])).unwrap();
        let k = kak_real(&g);
        assert!((k.a.a[0] - 2.0).abs() < 1e-12 && k.a.a[1].abs() < 1e-12 && (k.a.a[2] + 2.0).abs() < 1e-12);
        assert!((k.reconstruct() - g.matrix()).amax() < 1e-10);
        assert!(is_rotation(&k.k1, 1e-12) && is_rotation(&k.k2, 1e-12));
    }

    #[test]
    fn k_delta_examples() {
        assert!((k_delta_real(1.0).unwrap().matrix() - Matrix3::identity()).amax() < 1e-15);
        let k0 = k_delta_real(0.0).unwrap();
        assert_eq!(*k0.matrix(), Matrix3::new(0.0, -1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0));
        assert!(k0.in_k());
        assert!(k_delta_real(1.2).is_err());
        let kp = k_delta_padic(3, &q(0)).unwrap();
        assert_eq!(qmat_det(kp.matrix()), q(1));
        assert!(kp.in_k());
    }

    #[test]
    fn distortion_endpoints() {
        let s = solve_sphere_distortion(1.0, 1.0).unwrap();
        assert!(s.delta.abs() < 1e-12);
        let lhs = d_alpha(1.0) * k_delta_real(0.0).unwrap().matrix() * d_alpha(1.0);
        let rhs = exp_diag([1.0, 1.0, -2.0]) * k_delta_real(0.0).unwrap().matrix();
        assert!((lhs - rhs).amax() < 1e-12);
        let s = solve_sphere_distortion(1.0, 4.0).unwrap();
        assert!((s.delta - 1.0).abs() < 1e-12);
        let s = solve_sphere_distortion(1.0, 2.5).unwrap();
        assert!(s.delta > 0.0 && s.delta < 1.0 && s.delta <= (-1.5f64).exp());
        assert!(s.residual <= 1e-10 && s.reconstruction_residual <= 1e-9);
        assert!(in_u_tilde(&s.u, 1e-9) && in_u_tilde(&s.u2, 1e-9));
        assert!(solve_sphere_distortion(1.0, 0.5).is_err());
    }

    #[test]
    fn automorphism_examples() {
        let d = RealGroupElement::new(exp_diag([3.0, 1.0, -4.0])).unwrap();
        let r = cartan_automorphism(&d);
        assert!((r.matrix() - exp_diag([4.0, -1.0, -3.0])).amax() < 1e-9);
        let d = RealGroupElement::new(exp_diag([2.0, 0.0, -2.0])).unwrap();
        assert!((cartan_automorphism(&d).matrix() - d.matrix()).amax() < 1e-12);
    }

    #[test]
    fn padic_examples() {
        let g = PAdicGroupElement::new(2, qmat_diag([Q::new(1.into(), 4.into()), q(2), q(2)])).unwrap();
        assert_eq!(g.length_exponent(), 2);
        assert!((g.length() - 2.0 * 2f64.ln()).abs() < 1e-15);

        let g = PAdicGroupElement::new(3, qmat_diag([p_pow(3, -2), p_pow(3, 1), p_pow(3, 1)])).unwrap();
        assert_eq!(kak_padic(&g).a, [2, -1, -1]);

        let g =
            PAdicGroupElement::new(2, [[q(1), p_pow(2, -3), q(0)], [q(0), q(1), q(0)], [q(0), q(0), q(1)]]).unwrap();
        assert_eq!(kak_padic(&g).a, [3, 0, -3]);

        let g = PAdicGroupElement::from_ints(5, [[2, 1, 0], [1, 1, 0], [0, 0, 1]]).unwrap();
        assert_eq!(kak_padic(&g).a, [0, 0, 0]);
    }

    #[test]
    fn padic_distortion_examples() {
        for (alpha, r, v, t) in [(1, 4, 0, [4, -2, -2]), (1, 1, 3, [1, 1, -2]), (2, 5, 3, [5, -1, -4])] {
            let d = padic_sphere_distortion(3, alpha, r).unwrap();
            assert_eq!(d.delta_valuation, v);
            assert_eq!(d.triple.a, t);
            assert!(d.pass);
        }
        assert!(padic_sphere_distortion(3, 1, 5).is_err());
    }

    #[test]
    fn u0_examples() {
        assert_eq!(u0_automorphism(&PAdicGroupElement::identity(3)), PAdicGroupElement::identity(3));
        let d = PAdicGroupElement::new(3, qmat_diag([p_pow(3, -1), q(1), p_pow(3, 1)])).unwrap();
        assert_eq!(u0_automorphism(&d), d);
    }
}
