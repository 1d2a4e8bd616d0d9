//! Dense complex operators and operator-norm computation.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{LabError, Result};

/// Largest dimension for which `NormMethod::Auto` runs a dense full SVD.
pub const DENSE_SVD_MAX_DIM: usize = 729;

pub type CMat = DMatrix<Complex64>;

/// Basis label: a pair of ring representatives `(y, t)`, or `(i, 0)` for plain indices.
pub type Label = (u64, u64);

#[derive(Clone, Debug)]
pub struct DenseOperator {
    pub rows: Vec<Label>,
    pub cols: Vec<Label>,
    pub entries: CMat,
}

impl DenseOperator {
    pub fn new(rows: Vec<Label>, cols: Vec<Label>, entries: CMat) -> Result<Self> {
        if entries.nrows() != rows.len() || entries.ncols() != cols.len() {
            return Err(LabError::invalid("label lists do not match matrix shape"));
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(LabError::invalid("non-finite entry"));
        }
        Ok(Self { rows, cols, entries })
    }

    /// Operator with plain index labels.
    pub fn from_matrix(entries: CMat) -> Self {
        let rows = (0..entries.nrows() as u64).map(|i| (i, 0)).collect();
        let cols = (0..entries.ncols() as u64).map(|i| (i, 0)).collect();
        Self { rows, cols, entries }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows().max(self.entries.ncols())
    }

    /// Difference with another operator on the same labelled bases.
    pub fn sub(&self, other: &DenseOperator) -> Result<DenseOperator> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LabError::invalid("operators act on different bases"));
        }
        Ok(Self { rows: self.rows.clone(), cols: self.cols.clone(), entries: &self.entries - &other.entries })
    }

    pub fn max_entry(&self) -> f64 {
        max_abs(&self.entries)
    }
}

pub fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NormMethod {
    ExactDecomposition,
    FullSvd,
    PowerIteration,
    /// Full SVD up to `DENSE_SVD_MAX_DIM`, power iteration beyond.
    Auto,
}

impl NormMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            NormMethod::ExactDecomposition => "exact-decomposition",
            NormMethod::FullSvd => "full-SVD",
            NormMethod::PowerIteration => "power-iteration",
            NormMethod::Auto => "auto",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NormReport {
    pub value: f64,
    pub method: NormMethod,
    /// Full SVD: rounding estimate. Power iteration: eigen-residual bound on the value.
    pub residual: f64,
    pub iterations: usize,
}

/// Largest singular value of a dense matrix.
pub fn spectral_norm(m: &CMat) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone().singular_values().max()
}

pub fn operator_norm(op: &DenseOperator, method: NormMethod, tolerance: f64) -> Result<NormReport> {
    matrix_norm(&op.entries, method, tolerance)
}

pub fn matrix_norm(m: &CMat, method: NormMethod, tolerance: f64) -> Result<NormReport> {
    if !(tolerance > 0.0) {
        return Err(LabError::invalid("tolerance must be positive"));
    }
    let method = match method {
        NormMethod::Auto if m.nrows().max(m.ncols()) <= DENSE_SVD_MAX_DIM => NormMethod::FullSvd,
        NormMethod::Auto => NormMethod::PowerIteration,
        other => other,
    };
    match method {
        NormMethod::FullSvd => {
            let value = spectral_norm(m);
            let dim = m.nrows().max(m.ncols()) as f64;
            Ok(NormReport { value, method, residual: dim * f64::EPSILON * value, iterations: 0 })
        }
        NormMethod::PowerIteration => {
            let adj = m.adjoint();
            power_iteration(m.ncols(), |v| &adj * (m * v), tolerance, 20_000)
        }
        NormMethod::ExactDecomposition => {
            Err(LabError::invalid("exact decomposition needs a structured operator, not a dense matrix"))
        }
        NormMethod::Auto => unreachable!(),
    }
}

/// Power iteration on a Hermitian positive semidefinite map `H = A*A`, returning
/// `sqrt(lambda_max)`.
///
/// Stops when the eigen-residual `r = |Hv - lambda v|` satisfies `r <= tol * lambda`.
/// Some eigenvalue of `H` lies within `r` of the Rayleigh quotient, so the reported
/// singular value is within `r / sqrt(lambda)` of a singular value of `A`.
pub fn power_iteration<F>(dim: usize, apply_h: F, tolerance: f64, max_iter: usize) -> Result<NormReport>
where
    F: Fn(&DVector<Complex64>) -> DVector<Complex64>,
{
    if dim == 0 {
        return Ok(NormReport { value: 0.0, method: NormMethod::PowerIteration, residual: 0.0, iterations: 0 });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut v = DVector::from_fn(dim, |_, _| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5));
    v /= Complex64::from(v.norm());
    let mut last = (0.0, f64::INFINITY);
    for it in 1..=max_iter {
        let hv = apply_h(&v);
        let lambda = v.dotc(&hv).re.max(0.0);
        let residual = (&hv - &v * Complex64::from(lambda)).norm();
        let hn = hv.norm();
        if hn == 0.0 {
            return Ok(NormReport { value: 0.0, method: NormMethod::PowerIteration, residual: 0.0, iterations: it });
        }
        last = (lambda, residual);
        if residual <= tolerance * lambda.max(f64::MIN_POSITIVE) {
            let value = lambda.sqrt();
            return Ok(NormReport {
                value,
                method: NormMethod::PowerIteration,
                residual: residual / value,
                iterations: it,
            });
        }
        v = hv / Complex64::from(hn);
    }
    Err(LabError::NoConvergence(format!(
        "power iteration stopped after {max_iter} steps at value {} with residual {}",
        last.0.sqrt(),
        last.1
    )))
}
