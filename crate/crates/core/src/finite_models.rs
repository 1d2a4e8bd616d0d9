//! The averaging operators `S_{n,chi}` and `S_{n,delta}` on `l2(O_n x O_n)`.
//!
//! Both operators commute with translations in the second coordinate, so they are
//! stored as kernels `K[y][x][d]` with matrix entry `((y,t),(x,t')) = K[y][x][t'-t]`.
//! A discrete Fourier transform in `d` block-diagonalizes them exactly.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::error::{LabError, Result};
use crate::linalg::{spectral_norm, CMat, DenseOperator, Label, NormMethod, NormReport, DENSE_SVD_MAX_DIM};
use crate::residue_ring::{character_decompose, classify_character, AdditiveCharacter, ResidueRing, RingElem};

fn labels(ring: &ResidueRing) -> Vec<Label> {
    let q = ring.modulus();
    (0..q).flat_map(|y| (0..q).map(move |t| (y, t))).collect()
}

fn check_chi(ring: &ResidueRing, chi: &AdditiveCharacter) -> Result<(u32, u64)> {
    let h = chi.ring().level();
    if chi.ring().p() != ring.p() {
        return Err(LabError::invalid("character and ring use different primes"));
    }
    if h > ring.level() {
        return Err(LabError::invalid(format!("h = {h} exceeds n = {}", ring.level())));
    }
    if chi.is_trivial() {
        return Err(LabError::invalid("S_{n,chi} needs a nontrivial character"));
    }
    Ok((h, ring.p().pow(ring.level() - h)))
}

/// `S_{n,chi} f(y,t) = E_{x in O_n, z in O_h} chi(z) f(x, t + p^{n-h} z + x y)`, assembled entry by entry.
pub fn build_s_chi(ring: &ResidueRing, chi: &AdditiveCharacter) -> Result<DenseOperator> {
    let (_, shift) = check_chi(ring, chi)?;
    let q = ring.modulus();
    let qh = chi.ring().modulus();
    let scale = 1.0 / (q as f64 * qh as f64);
    let dim = (q * q) as usize;
    let mut m = CMat::zeros(dim, dim);
    for y in 0..q {
        for t in 0..q {
            let row = (y * q + t) as usize;
            for x in 0..q {
                for z in 0..qh {
                    let t2 = (t + shift * z + x * y) % q;
                    m[(row, (x * q + t2) as usize)] += chi.eval_raw(z) * scale;
                }
            }
        }
    }
    DenseOperator::new(labels(ring), labels(ring), m)
}

/// `S_{n,delta} f(y,t) = E_x f(x, t + delta + x y)`, assembled entry by entry.
pub fn build_s_delta(ring: &ResidueRing, delta: &RingElem) -> Result<DenseOperator> {
    if delta.ring() != *ring {
        return Err(LabError::invalid("delta must lie in O_n"));
    }
    let q = ring.modulus();
    let dim = (q * q) as usize;
    let mut m = CMat::zeros(dim, dim);
    let w = Complex64::new(1.0 / q as f64, 0.0);
    for y in 0..q {
        for t in 0..q {
            for x in 0..q {
                let t2 = (t + delta.value() + x * y) % q;
                m[((y * q + t) as usize, (x * q + t2) as usize)] += w;
            }
        }
    }
    DenseOperator::new(labels(ring), labels(ring), m)
}

/// Operator on `l2(O_n x O_n)` commuting with translation in the second coordinate.
#[derive(Clone, Debug)]
pub struct ShiftKernelOperator {
    ring: ResidueRing,
    kernel: Vec<Complex64>,
}

impl ShiftKernelOperator {
    fn zeros(ring: ResidueRing) -> Self {
        let q = ring.modulus() as usize;
        Self { ring, kernel: vec![Complex64::new(0.0, 0.0); q * q * q] }
    }

    fn idx(&self, y: u64, x: u64, d: u64) -> usize {
        let q = self.ring.modulus();
        ((y * q + x) * q + d) as usize
    }

    pub fn ring(&self) -> ResidueRing {
        self.ring
    }

    pub fn dim(&self) -> usize {
        let q = self.ring.modulus() as usize;
        q * q
    }

    pub fn kernel(&self, y: u64, x: u64, d: u64) -> Complex64 {
        self.kernel[self.idx(y, x, d)]
    }

    pub fn s_chi(ring: &ResidueRing, chi: &AdditiveCharacter) -> Result<Self> {
        let (_, shift) = check_chi(ring, chi)?;
        let q = ring.modulus();
        let qh = chi.ring().modulus();
        let scale = 1.0 / (q as f64 * qh as f64);
        let mut op = Self::zeros(*ring);
        for y in 0..q {
            for x in 0..q {
                for z in 0..qh {
                    let i = op.idx(y, x, (shift * z + x * y) % q);
                    op.kernel[i] += chi.eval_raw(z) * scale;
                }
            }
        }
        Ok(op)
    }

    pub fn s_delta(ring: &ResidueRing, delta: &RingElem) -> Result<Self> {
        if delta.ring() != *ring {
            return Err(LabError::invalid("delta must lie in O_n"));
        }
        let q = ring.modulus();
        let mut op = Self::zeros(*ring);
        for y in 0..q {
            for x in 0..q {
                let i = op.idx(y, x, (delta.value() + x * y) % q);
                op.kernel[i] += Complex64::new(1.0 / q as f64, 0.0);
            }
        }
        Ok(op)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.axpy(Complex64::new(-1.0, 0.0), other)
    }

    /// `self + c * other`.
    pub fn axpy(&self, c: Complex64, other: &Self) -> Result<Self> {
        if self.ring != other.ring {
            return Err(LabError::invalid("operators on different rings"));
        }
        let kernel = self.kernel.iter().zip(&other.kernel).map(|(a, b)| a + c * b).collect();
        Ok(Self { ring: self.ring, kernel })
    }

    pub fn max_entry(&self) -> f64 {
        self.kernel.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn to_dense(&self) -> DenseOperator {
        let q = self.ring.modulus();
        let dim = self.dim();
        let m = DMatrix::from_fn(dim, dim, |r, c| {
            let (y, t) = (r as u64 / q, r as u64 % q);
            let (x, t2) = (c as u64 / q, c as u64 % q);
            self.kernel(y, x, (t2 + q - t) % q)
        });
        DenseOperator { rows: labels(&self.ring), cols: labels(&self.ring), entries: m }
    }

    /// Matrix-free application.
    pub fn apply(&self, f: &DVector<Complex64>) -> DVector<Complex64> {
        let q = self.ring.modulus() as usize;
        let mut out = DVector::zeros(q * q);
        for y in 0..q {
            for x in 0..q {
                let k = &self.kernel[(y * q + x) * q..(y * q + x + 1) * q];
                for (d, kd) in k.iter().enumerate() {
                    if kd.re == 0.0 && kd.im == 0.0 {
                        continue;
                    }
                    for t in 0..q {
                        out[y * q + t] += kd * f[x * q + (t + d) % q];
                    }
                }
            }
        }
        out
    }

    /// Adjoint application.
    pub fn apply_adjoint(&self, g: &DVector<Complex64>) -> DVector<Complex64> {
        let q = self.ring.modulus() as usize;
        let mut out = DVector::zeros(q * q);
        for y in 0..q {
            for x in 0..q {
                let k = &self.kernel[(y * q + x) * q..(y * q + x + 1) * q];
                for (d, kd) in k.iter().enumerate() {
                    if kd.re == 0.0 && kd.im == 0.0 {
                        continue;
                    }
                    let c = kd.conj();
                    for t in 0..q {
                        out[x * q + (t + d) % q] += c * g[y * q + t];
                    }
                }
            }
        }
        out
    }

    /// Blocks `B_c[y,x] = sum_d K[y][x][d] psi_c(d)` for `psi_c(d) = exp(2 pi i c d / p^n)`.
    /// The operator is unitarily equivalent to the direct sum of these blocks.
    pub fn fourier_blocks(&self) -> Vec<CMat> {
        let q = self.ring.modulus() as usize;
        let fft = FftPlanner::new().plan_fft_inverse(q);
        let mut blocks = vec![CMat::zeros(q, q); q];
        let mut buf = vec![Complex64::new(0.0, 0.0); q];
        for y in 0..q {
            for x in 0..q {
                buf.copy_from_slice(&self.kernel[(y * q + x) * q..(y * q + x + 1) * q]);
                fft.process(&mut buf);
                for (c, v) in buf.iter().enumerate() {
                    blocks[c][(y, x)] = *v;
                }
            }
        }
        blocks
    }

    pub fn norm(&self, method: NormMethod, tolerance: f64) -> Result<NormReport> {
        let method = match method {
            NormMethod::Auto if self.dim() <= DENSE_SVD_MAX_DIM => NormMethod::FullSvd,
            NormMethod::Auto => NormMethod::ExactDecomposition,
            m => m,
        };
        match method {
            NormMethod::ExactDecomposition => {
                let value = self.fourier_blocks().iter().map(spectral_norm).fold(0.0, f64::max);
                let q = self.ring.modulus() as f64;
                Ok(NormReport { value, method, residual: q * q * f64::EPSILON * value.max(1e-300), iterations: 0 })
            }
            NormMethod::FullSvd => crate::linalg::operator_norm(&self.to_dense(), method, tolerance),
            NormMethod::PowerIteration => {
                crate::linalg::power_iteration(self.dim(), |v| self.apply_adjoint(&self.apply(v)), tolerance, 20_000)
            }
            NormMethod::Auto => unreachable!(),
        }
    }
}

/// `max |(S_{n,delta} - S_{n,delta'}) - sum_chi t_chi S_{n,chi}|` over all matrix entries, with
/// `delta = p^{n-h} a`, `delta' = p^{n-h} b`. Every matrix entry equals a kernel entry, so the
/// kernel comparison covers the full matrix.
pub fn verify_s_decomposition(ring: &ResidueRing, a: &RingElem, b: &RingElem) -> Result<f64> {
    let ring_h = a.ring();
    if ring_h.level() > ring.level() || ring_h.p() != ring.p() {
        return Err(LabError::invalid("need h <= n over the same prime"));
    }
    let lhs = ShiftKernelOperator::s_delta(ring, &ring.embed(*a)?)?
        .sub(&ShiftKernelOperator::s_delta(ring, &ring.embed(*b)?)?)?;
    let mut rhs = ShiftKernelOperator::zeros(*ring);
    for (chi, t) in character_decompose(a, b)? {
        if chi.is_trivial() {
            if t.norm() > 1e-12 {
                return Err(LabError::Internal("trivial coefficient is nonzero".into()));
            }
            continue;
        }
        rhs = rhs.axpy(t, &ShiftKernelOperator::s_chi(ring, &chi)?)?;
    }
    Ok(lhs.sub(&rhs)?.max_entry())
}

/// Dense version of the same identity, assembling every operator entry by entry.
pub fn verify_s_decomposition_dense(ring: &ResidueRing, a: &RingElem, b: &RingElem) -> Result<f64> {
    let lhs = build_s_delta(ring, &ring.embed(*a)?)?.sub(&build_s_delta(ring, &ring.embed(*b)?)?)?;
    let mut rhs = CMat::zeros(lhs.entries.nrows(), lhs.entries.ncols());
    for (chi, t) in character_decompose(a, b)? {
        if !chi.is_trivial() {
            rhs += build_s_chi(ring, &chi)?.entries * t;
        }
    }
    Ok(crate::linalg::max_abs(&(lhs.entries - rhs)))
}

/// Norm of `S_{n,chi}` for one character, with the Hilbert-case decay bound.
#[derive(Clone, Debug, Serialize)]
pub struct DecayCase {
    pub p: u64,
    pub n: u32,
    pub h: u32,
    pub index: u64,
    pub degenerate: bool,
    pub norm: NormReport,
    /// `p^{-(n-h)/2}` for nondegenerate characters; the reduced operator's norm otherwise.
    pub bound: f64,
    pub pass: bool,
}

pub fn decay_case(p: u64, n: u32, h: u32, index: u64, method: NormMethod) -> Result<DecayCase> {
    let ring = ResidueRing::new(p, n)?;
    let chi = AdditiveCharacter::new(ResidueRing::new(p, h)?, index as i64);
    let class = classify_character(&chi)?;
    let norm = ShiftKernelOperator::s_chi(&ring, &chi)?.norm(method, 1e-12)?;
    let (bound, pass) = if class.degenerate {
        let reduced_ring = ResidueRing::new(p, n - h + class.level)?;
        let r = ShiftKernelOperator::s_chi(&reduced_ring, &class.reduced)?.norm(method, 1e-12)?;
        (r.value, (norm.value - r.value).abs() <= 1e-9)
    } else {
        let b = (p as f64).powf(-((n - h) as f64) / 2.0);
        (b, norm.value <= b + 1e-9)
    };
    Ok(DecayCase { p, n, h, index, degenerate: class.degenerate, norm, bound, pass })
}

/// Fourier blocks of `S_{n,delta}` in the second coordinate.
#[derive(Clone, Debug)]
pub struct FourierDiagonalization {
    ring: ResidueRing,
    /// `G_c[y,x] = psi_c(x y) / p^n`, indexed by `c`.
    pub blocks: Vec<CMat>,
}

pub fn fourier_diagonalize_s_delta(ring: &ResidueRing) -> FourierDiagonalization {
    let q = ring.modulus();
    let blocks = (0..q)
        .map(|c| {
            let psi = AdditiveCharacter::new(*ring, c as i64);
            CMat::from_fn(q as usize, q as usize, |y, x| psi.eval_raw((x as u64 * y as u64) % q) / q as f64)
        })
        .collect();
    FourierDiagonalization { ring: *ring, blocks }
}

impl FourierDiagonalization {
    pub fn ring(&self) -> ResidueRing {
        self.ring
    }

    /// Block of `S_{n,delta}` on the `psi_c`-isotypic part: `psi_c(delta) G_c`.
    pub fn block(&self, c: u64, delta: &RingElem) -> CMat {
        let psi = AdditiveCharacter::new(self.ring, c as i64);
        &self.blocks[c as usize] * psi.eval_raw(delta.value())
    }

    /// `S = sum_c psi_c(delta) G_c (x) P_c` with `P_c[t,t'] = psi_c(t) conj(psi_c(t')) / p^n`.
    pub fn reassemble(&self, delta: &RingElem) -> DenseOperator {
        let q = self.ring.modulus();
        let dim = (q * q) as usize;
        let mut m = CMat::zeros(dim, dim);
        for c in 0..q {
            let psi = AdditiveCharacter::new(self.ring, c as i64);
            let b = self.block(c, delta);
            for y in 0..q {
                for x in 0..q {
                    let v = b[(y as usize, x as usize)] / q as f64;
                    if v.norm() == 0.0 {
                        continue;
                    }
                    for t in 0..q {
                        let pt = psi.eval_raw(t);
                        for t2 in 0..q {
                            m[((y * q + t) as usize, (x * q + t2) as usize)] += v * pt * psi.eval_raw(t2).conj();
                        }
                    }
                }
            }
        }
        DenseOperator { rows: labels(&self.ring), cols: labels(&self.ring), entries: m }
    }

    pub fn block_norms(&self) -> Vec<f64> {
        self.blocks.iter().map(spectral_norm).collect()
    }

    /// `max_c |psi_c(delta) - psi_c(delta')| * |G_c|`.
    pub fn difference_norm(&self, delta: &RingElem, delta2: &RingElem) -> f64 {
        self.block_norms()
            .iter()
            .enumerate()
            .map(|(c, g)| {
                let psi = AdditiveCharacter::new(self.ring, c as i64);
                (psi.eval_raw(delta.value()) - psi.eval_raw(delta2.value())).norm() * g
            })
            .fold(0.0, f64::max)
    }
}

/// Ratio `(sum_chi |E_s chi(s) f(s)|^2)^{1/2} / (sum_s |f(s)|^2)^{1/2}` on `Z/m`,
/// with the constant `C` of the bound `C m^{-epsilon}` at `epsilon = 1/2`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct HausdorffYoung {
    pub ratio: f64,
    pub constant: f64,
    pub epsilon: f64,
}

pub fn hausdorff_young_ratio(f: &[Complex64]) -> Result<HausdorffYoung> {
    let m = f.len();
    let denom = f.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if m == 0 || denom == 0.0 {
        return Err(LabError::invalid("f must be nonzero"));
    }
    let mut buf = f.to_vec();
    FftPlanner::new().plan_fft_inverse(m).process(&mut buf);
    let num = buf.iter().map(|z| (z / m as f64).norm_sqr()).sum::<f64>().sqrt();
    let ratio = num / denom;
    Ok(HausdorffYoung { ratio, constant: ratio * (m as f64).sqrt(), epsilon: 0.5 })
}

/// Outcome of checking `L alpha(a,b) beta(x,y) R = k_{p^{2j} delta}` modulo `p^N`.
#[derive(Clone, Debug, Serialize)]
pub struct KDeltaCheck {
    pub ok: bool,
    pub delta: u64,
    pub delta_valuation: u32,
    pub omega: u64,
    pub precision: u32,
    pub det_alpha: i128,
    pub det_beta: i128,
    pub conjugators_in_congruence_subgroup: bool,
    pub identity_holds: bool,
}

type M3 = [[i128; 3]; 3];

fn mat_mul_mod(a: &M3, b: &M3, m: i128) -> M3 {
    let mut c = [[0i128; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let mut s = 0i128;
            for k in 0..3 {
                s = (s + a[i][k].rem_euclid(m) * b[k][j].rem_euclid(m)) % m;
            }
            c[i][j] = s;
        }
    }
    c
}

fn det3(a: &M3) -> i128 {
    a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
}

fn inv_mod(a: i128, m: i128) -> Option<i128> {
    let (mut r0, mut r1) = (a.rem_euclid(m), m);
    let (mut s0, mut s1) = (1i128, 0i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    (r0 == 1).then(|| s0.rem_euclid(m))
}

pub fn alpha_matrix(p: i128, j: u32, a: i128, b: i128) -> M3 {
    let pj = p.pow(j);
    [[1, -pj * a, -pj * pj * b], [0, 0, 1], [0, -1, 0]]
}

pub fn beta_matrix(p: i128, j: u32, x: i128, y: i128) -> M3 {
    let pj = p.pow(j);
    [[pj * pj * y, -1, 0], [pj * x, 0, -1], [1, 0, 0]]
}

/// With `delta = y - a x - b` in `O_n` and `omega = (s(y) - s(a) s(x) - s(b)) / delta` for the
/// canonical section `s`, the conjugators
/// `L = [[1/omega,0,0],[0,1,0],[0,p^j omega x,omega]]` and
/// `R = [[1,0,0],[0,omega,p^j a/omega],[0,0,1/omega]]`
/// satisfy `L alpha(a,b) beta(x,y) R = k_{p^{2j} delta}`.
pub fn verify_kdelta_conjugation(
    j: u32,
    a: &RingElem,
    b: &RingElem,
    x: &RingElem,
    y: &RingElem,
    precision: u32,
) -> Result<KDeltaCheck> {
    let ring = a.ring();
    if [b, x, y].iter().any(|e| e.ring() != ring) {
        return Err(LabError::invalid("a, b, x, y must lie in the same O_n"));
    }
    let n = ring.level();
    let p = ring.p() as i128;
    if (precision as f64) * (p as f64).log2() > 60.0 {
        return Err(LabError::invalid("working precision too large for exact i128 products"));
    }
    if precision < n + 2 * j {
        return Err(LabError::invalid("working precision must be at least n + 2j"));
    }
    let (sa, sb, sx, sy) = (a.value() as i128, b.value() as i128, x.value() as i128, y.value() as i128);
    let big_delta = sy - sa * sx - sb;
    let delta = ring.elem((big_delta.rem_euclid(ring.modulus() as i128)) as i64);
    let v = delta.valuation();
    if delta.value() == 0 || v + j > n {
        return Err(LabError::invalid(format!(
            "delta = {} has valuation {v} > n - j = {}; the identity is not claimed",
            delta.value(),
            n as i64 - j as i64
        )));
    }
    let m = p.pow(precision);
    let pv = p.pow(v);
    let unit_delta = delta.value() as i128 / pv;
    let unit_big = big_delta / pv;
    let omega = (unit_big.rem_euclid(m) * inv_mod(unit_delta, m).expect("unit")) % m;
    let omega_inv = inv_mod(omega, m).ok_or_else(|| LabError::Internal("omega not a unit".into()))?;
    let pj = p.pow(j);

    let l: M3 = [[omega_inv, 0, 0], [0, 1, 0], [0, (pj * omega % m) * sx % m, omega]];
    let r: M3 = [[1, 0, 0], [0, omega, (pj * omega_inv % m) * sa % m], [0, 0, omega_inv]];
    let al = alpha_matrix(p, j, sa, sb);
    let be = beta_matrix(p, j, sx, sy);
    let lhs = mat_mul_mod(&mat_mul_mod(&mat_mul_mod(&l, &al, m), &be, m), &r, m);
    let k: M3 = [[pj * pj * delta.value() as i128, -1, 0], [1, 0, 0], [0, 0, 1]];
    let identity_holds = (0..3).all(|i| (0..3).all(|c| (lhs[i][c] - k[i][c]).rem_euclid(m) == 0));

    let congruent = |g: &M3| {
        let pattern = g[0][1] == 0 && g[0][2] == 0 && g[1][0] == 0 && g[2][0] == 0;
        let near_id = (0..3).all(|i| (0..3).all(|c| (g[i][c] - i128::from(i == c)).rem_euclid(pj) == 0));
        pattern && near_id && det_mod(g, m) == 1
    };
    let in_uj = congruent(&l) && congruent(&r) && (omega - 1).rem_euclid(pj) == 0;
    let det_alpha = det3(&al);
    let det_beta = det3(&be);
    Ok(KDeltaCheck {
        ok: identity_holds && in_uj && det_alpha == 1 && det_beta == 1,
        delta: delta.value(),
        delta_valuation: v,
        omega: omega as u64,
        precision,
        det_alpha,
        det_beta,
        conjugators_in_congruence_subgroup: in_uj,
        identity_holds,
    })
}

fn det_mod(g: &M3, m: i128) -> i128 {
    let mm = |a: i128, b: i128| (a.rem_euclid(m) * b.rem_euclid(m)) % m;
    let t0 = mm(g[0][0], (mm(g[1][1], g[2][2]) - mm(g[1][2], g[2][1])).rem_euclid(m));
    let t1 = mm(g[0][1], (mm(g[1][0], g[2][2]) - mm(g[1][2], g[2][0])).rem_euclid(m));
    let t2 = mm(g[0][2], (mm(g[1][0], g[2][1]) - mm(g[1][1], g[2][0])).rem_euclid(m));
    (t0 - t1 + t2).rem_euclid(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs;

    fn ring(p: u64, n: u32) -> ResidueRing {
        ResidueRing::new(p, n).unwrap()
    }

    #[test]
    fn s_chi_smallest_case() {
        let r = ring(2, 1);
        let chi = AdditiveCharacter::new(r, 1);
        let s = build_s_chi(&r, &chi).unwrap();
        for y in 0..2u64 {
            for t in 0..2u64 {
                for x in 0..2u64 {
                    for t2 in 0..2u64 {
                        let z = (t2 + 4 - t - x * y) % 2;
                        let want = if z == 0 { 0.25 } else { -0.25 };
                        let got = s.entries[((y * 2 + t) as usize, (x * 2 + t2) as usize)];
                        assert!((got - Complex64::new(want, 0.0)).norm() < 1e-15);
                    }
                }
            }
        }
    }

    #[test]
    fn s_delta_smallest_case() {
        let r = ring(2, 1);
        let s = build_s_delta(&r, &r.elem(0)).unwrap();
        for y in 0..2u64 {
            for t in 0..2u64 {
                for x in 0..2u64 {
                    for t2 in 0..2u64 {
                        let want = if t2 == (t + x * y) % 2 { 0.5 } else { 0.0 };
                        let got = s.entries[((y * 2 + t) as usize, (x * 2 + t2) as usize)];
                        assert_eq!(got, Complex64::new(want, 0.0));
                    }
                }
            }
        }
    }

    #[test]
    fn kernel_form_matches_direct_assembly() {
        for (p, n, h) in [(2, 2, 1), (2, 3, 2), (3, 2, 2)] {
            let r = ring(p, n);
            let chi = AdditiveCharacter::new(ring(p, h), 1);
            let direct = build_s_chi(&r, &chi).unwrap();
            let kern = ShiftKernelOperator::s_chi(&r, &chi).unwrap().to_dense();
            assert!(max_abs(&(direct.entries - kern.entries)) < 1e-15);
            let d = r.elem(3);
            let direct = build_s_delta(&r, &d).unwrap();
            let kern = ShiftKernelOperator::s_delta(&r, &d).unwrap().to_dense();
            assert!(max_abs(&(direct.entries - kern.entries)) < 1e-15);
        }
    }

    #[test]
    fn rejects_bad_levels() {
        let r = ring(2, 2);
        assert!(build_s_chi(&r, &AdditiveCharacter::new(ring(2, 3), 1)).is_err());
        assert!(build_s_chi(&r, &AdditiveCharacter::new(ring(2, 1), 0)).is_err());
    }

    #[test]
    fn apply_matches_dense() {
        let r = ring(3, 2);
        let op = ShiftKernelOperator::s_chi(&r, &AdditiveCharacter::new(ring(3, 1), 2)).unwrap();
        let f = DVector::from_fn(81, |i, _| Complex64::new((i as f64).sin(), (i as f64 * 0.3).cos()));
        let dense = op.to_dense().entries;
        assert!((op.apply(&f) - &dense * &f).norm() < 1e-13);
        assert!((op.apply_adjoint(&f) - dense.adjoint() * &f).norm() < 1e-13);
    }

    #[test]
    fn decomposition_examples() {
        let r = ring(2, 2);
        let h = ring(2, 1);
        assert!(verify_s_decomposition(&r, &h.elem(1), &h.elem(0)).unwrap() <= 1e-12);
        assert!(verify_s_decomposition_dense(&r, &h.elem(1), &h.elem(0)).unwrap() <= 1e-12);
        assert_eq!(verify_s_decomposition(&r, &h.elem(1), &h.elem(1)).unwrap(), 0.0);
        let r = ring(3, 3);
        let h = ring(3, 2);
        assert!(verify_s_decomposition(&r, &h.elem(4), &h.elem(1)).unwrap() <= 1e-12);
        assert!(verify_s_decomposition_dense(&r, &h.elem(4), &h.elem(1)).unwrap() <= 1e-12);
    }

    #[test]
    fn fourier_examples() {
        let r = ring(2, 2);
        let fd = fourier_diagonalize_s_delta(&r);
        assert!((spectral_norm(&fd.blocks[0]) - 1.0).abs() < 1e-12);
        let d = r.elem(1);
        let re = fd.reassemble(&d);
        let direct = build_s_delta(&r, &d).unwrap();
        assert!(max_abs(&(re.entries - direct.entries)) <= 1e-12);

        let r = ring(3, 2);
        let fd = fourier_diagonalize_s_delta(&r);
        let (d1, d0) = (r.elem(1), r.elem(0));
        let dense = build_s_delta(&r, &d1).unwrap().sub(&build_s_delta(&r, &d0).unwrap()).unwrap();
        let svd = spectral_norm(&dense.entries);
        assert!((fd.difference_norm(&d1, &d0) - svd).abs() <= 1e-9);
    }

    #[test]
    fn hausdorff_young_examples() {
        let r = hausdorff_young_ratio(&[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]).unwrap();
        assert!((r.ratio - 0.5f64.sqrt()).abs() < 1e-15);
        let r = hausdorff_young_ratio(&[Complex64::new(2.0, 1.0); 8]).unwrap();
        assert!((r.ratio - 8f64.powf(-0.5)).abs() < 1e-15);
        assert!((r.constant - 1.0).abs() < 1e-14);
        assert!(hausdorff_young_ratio(&[Complex64::new(0.0, 0.0); 3]).is_err());
    }

    #[test]
    fn kdelta_examples() {
        let r = ring(3, 3);
        let c = verify_kdelta_conjugation(1, &r.elem(1), &r.elem(0), &r.elem(1), &r.elem(2), 5).unwrap();
        assert!(c.ok, "{c:?}");
        assert_eq!(c.delta, 1);
        let c = verify_kdelta_conjugation(1, &r.elem(1), &r.elem(0), &r.elem(1), &r.elem(2), 9).unwrap();
        assert!(c.ok);

        let c = verify_kdelta_conjugation(1, &r.elem(0), &r.elem(0), &r.elem(0), &r.elem(5), 9).unwrap();
        assert!(c.ok);
        assert_eq!(c.omega, 1);

        // delta = 9 has valuation 2: allowed for j = 1, rejected for j = 2.
        assert!(verify_kdelta_conjugation(1, &r.elem(0), &r.elem(0), &r.elem(0), &r.elem(9), 9).is_ok());
        assert!(verify_kdelta_conjugation(2, &r.elem(0), &r.elem(0), &r.elem(0), &r.elem(9), 10).is_err());
        assert!(verify_kdelta_conjugation(1, &r.elem(0), &r.elem(0), &r.elem(0), &r.elem(0), 9).is_err());
    }

    #[test]
    fn alpha_beta_have_unit_determinant() {
        for (a, b, x, y) in [(0, 0, 0, 0), (1, 2, 3, 4), (-5, 7, 11, -2)] {
            assert_eq!(det3(&alpha_matrix(3, 2, a, b)), 1);
            assert_eq!(det3(&beta_matrix(3, 2, x, y)), 1);
        }
    }
}
