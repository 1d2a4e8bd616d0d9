//! Zig-zag paths through the Weyl chamber of SL(3) with explicit distance budgets, and
//! the transport of `(s, t, C)` parameters under length changes and direct products.

use serde::Serialize;

use crate::error::{LabError, Result};

pub type Point = [f64; 3];

const EPS: f64 = 1e-12;

fn check_regime(s: f64, l: f64) -> Result<f64> {
    if !(0.0..0.25).contains(&s) {
        return Err(LabError::region(format!("s = {s} must lie in [0, 1/4)")));
    }
    if !(l > 0.0) {
        return Err(LabError::invalid(format!("L = {l} must be positive")));
    }
    Ok(0.5 - 2.0 * s)
}

fn check_chamber(a: &Point) -> Result<()> {
    if !(a[0] >= a[1] - EPS && a[1] >= a[2] - EPS && (a[0] + a[1] + a[2]).abs() <= 1e-10) {
        return Err(LabError::region(format!("{a:?} is not in the Weyl chamber")));
    }
    Ok(())
}

/// `14 L^2 e^{t a3}` for points sharing `a3` with `a2, a2' >= -1`.
pub fn horizontal_bound(a: &Point, b: &Point, s: f64, l: f64) -> Result<f64> {
    let t = check_regime(s, l)?;
    check_chamber(a)?;
    check_chamber(b)?;
    if (a[2] - b[2]).abs() > EPS {
        return Err(LabError::region(format!("a3 differs: {} vs {}", a[2], b[2])));
    }
    if a[1] < -1.0 - EPS || b[1] < -1.0 - EPS {
        return Err(LabError::region(format!("a2 >= -1 violated: {} / {}", a[1], b[1])));
    }
    Ok(14.0 * l * l * (t * a[2]).exp())
}

/// `14 L^2 e^{-t a1}` for points sharing `a1` with `a2, a2' <= 1`.
pub fn vertical_bound(a: &Point, b: &Point, s: f64, l: f64) -> Result<f64> {
    let t = check_regime(s, l)?;
    check_chamber(a)?;
    check_chamber(b)?;
    if (a[0] - b[0]).abs() > EPS {
        return Err(LabError::region(format!("a1 differs: {} vs {}", a[0], b[0])));
    }
    if a[1] > 1.0 + EPS || b[1] > 1.0 + EPS {
        return Err(LabError::region(format!("a2 <= 1 violated: {} / {}", a[1], b[1])));
    }
    Ok(14.0 * l * l * (-t * a[0]).exp())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StepKind {
    Horizontal,
    Vertical,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZigZagStep {
    pub kind: StepKind,
    pub from: Point,
    pub to: Point,
    pub bound: f64,
    pub justification: String,
}

fn step(kind: StepKind, from: Point, to: Point, s: f64, l: f64) -> Result<ZigZagStep> {
    let (bound, justification) = match kind {
        StepKind::Horizontal => (horizontal_bound(&from, &to, s, l)?, "horizontal: a3 = a3', a2,a2' >= -1"),
        StepKind::Vertical => (vertical_bound(&from, &to, s, l)?, "vertical: a1 = a1', a2,a2' <= 1"),
    };
    Ok(ZigZagStep { kind, from, to, bound, justification: justification.to_string() })
}

pub fn axis_point(r: f64) -> Point {
    [r, 0.0, -r]
}

/// Steps from `c_{r2}` down to `c_{r1}` along the axis `a2 = 0`, in `K = max(1, ceil(r2 - r1))`
/// pieces: unit pieces from `r1` up, and a shorter last piece ending exactly at `r2`. Piece
/// `x -> x'` (`x' <= x + 1`) goes vertically from `c_x` to `(x, x' - x, -x')` and then
/// horizontally to `c_{x'}`.
pub fn axis_chain(r1: f64, r2: f64, s: f64, l: f64) -> Result<Vec<ZigZagStep>> {
    check_regime(s, l)?;
    if r1 < 1.0 {
        return Err(LabError::region(format!("axis chain starts at r = 1, got {r1}")));
    }
    if r2 < r1 {
        return Err(LabError::invalid("need r1 <= r2"));
    }
    let mut xs = vec![r1];
    let mut k = 1.0;
    while r1 + k < r2 - EPS {
        xs.push(r1 + k);
        k += 1.0;
    }
    xs.push(r2);
    let pieces = xs.len() - 1;
    let mut steps = Vec::with_capacity(2 * pieces);
    for k in (0..pieces).rev() {
        let (lo, hi) = (xs[k], xs[k + 1]);
        let corner = [hi, lo - hi, -lo];
        steps.push(step(StepKind::Vertical, axis_point(hi), corner, s, l)?);
        steps.push(step(StepKind::Horizontal, corner, axis_point(lo), s, l)?);
    }
    Ok(steps)
}

/// Sum of the axis-chain step bounds between `c_{r1}` and `c_{r2}`.
pub fn axis_chain_bound(r1: f64, r2: f64, s: f64, l: f64) -> Result<f64> {
    Ok(axis_chain(r1, r2, s, l)?.iter().map(|st| st.bound).sum())
}

/// `(84 / (1 - 4s)) L^2 e^{-t r1}`: each unit piece contributes two legs of at most
/// `14 L^2 e^{-t x}`, and `sum_k e^{-tk} <= 3 / (1 - 4s)`.
pub fn axis_chain_envelope(r1: f64, s: f64, l: f64) -> f64 {
    84.0 / (1.0 - 4.0 * s) * l * l * (-(0.5 - 2.0 * s) * r1).exp()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CertParams {
    pub s: f64,
    #[serde(rename = "L")]
    pub l: f64,
    pub t: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundCertificate {
    pub params: CertParams,
    pub steps: Vec<ZigZagStep>,
    pub total: f64,
    pub target: f64,
    pub pass: bool,
}

/// `max(a1, -a3)`.
pub fn radius(a: &Point) -> f64 {
    a[0].max(-a[2])
}

/// Axis radius reached from `a`: `-a3` by a horizontal step when `a2 >= 0`, `a1` by a
/// vertical step otherwise.
fn axis_radius(a: &Point) -> f64 {
    if a[1] >= 0.0 {
        -a[2]
    } else {
        a[0]
    }
}

fn leg_to_axis(a: &Point, s: f64, l: f64) -> Result<Option<ZigZagStep>> {
    let c = axis_point(axis_radius(a));
    if *a == c {
        return Ok(None);
    }
    let kind = if a[1] >= 0.0 { StepKind::Horizontal } else { StepKind::Vertical };
    step(kind, *a, c, s, l).map(Some)
}

fn reversed(st: ZigZagStep) -> ZigZagStep {
    ZigZagStep { from: st.to, to: st.from, ..st }
}

/// Certificate for the distance between the chamber points `a` and `b`, with target
/// `(70 / (1 - 4s)) L^2 max(e^{-t R(a)}, e^{-t R(b)})`.
///
/// A looser `100 / (1 - 4s)` constant is sometimes quoted for the same estimate; the
/// certificate checks the sharper 70.
pub fn zigzag_certificate(a: &Point, b: &Point, s: f64, l: f64) -> Result<BoundCertificate> {
    let t = check_regime(s, l)?;
    check_chamber(a)?;
    check_chamber(b)?;
    let (ra, rb) = (radius(a), radius(b));
    let target = 70.0 / (1.0 - 4.0 * s) * l * l * (-t * ra).exp().max((-t * rb).exp());
    let mut steps = Vec::new();
    if a != b {
        let (xa, xb) = (axis_radius(a), axis_radius(b));
        if xa < 1.0 || xb < 1.0 {
            return Err(LabError::region("endpoints need max(a1, -a3) >= 1"));
        }
        steps.extend(leg_to_axis(a, s, l)?);
        if xa != xb {
            let chain = axis_chain(xa.min(xb), xa.max(xb), s, l)?;
            if xa > xb {
                steps.extend(chain);
            } else {
                steps.extend(chain.into_iter().rev().map(reversed));
            }
        }
        steps.extend(leg_to_axis(b, s, l)?.map(reversed));
    }
    let total = steps.iter().map(|st| st.bound).sum();
    Ok(BoundCertificate { params: CertParams { s, l, t }, steps, total, target, pass: total <= target })
}

/// Recomputes every step bound and region check from scratch; returns the recomputed total.
pub fn revalidate(cert: &BoundCertificate) -> Result<f64> {
    let CertParams { s, l, .. } = cert.params;
    let mut total = 0.0;
    let mut prev: Option<Point> = None;
    for st in &cert.steps {
        if let Some(p) = prev {
            if p != st.from {
                return Err(LabError::Internal("path is not connected".into()));
            }
        }
        let b = match st.kind {
            StepKind::Horizontal => horizontal_bound(&st.from, &st.to, s, l)?,
            StepKind::Vertical => vertical_bound(&st.from, &st.to, s, l)?,
        };
        if b != st.bound {
            return Err(LabError::Internal(format!("step bound {} recomputes to {b}", st.bound)));
        }
        total += b;
        prev = Some(st.to);
    }
    Ok(total)
}

/// `(s, t, C)` in the convergence contract `|pi(m_n) - P| <= C L^2 e^{-tn}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct StarParams {
    pub s: f64,
    pub t: f64,
    #[serde(rename = "C")]
    pub c: f64,
}

impl StarParams {
    pub fn new(s: f64, t: f64, c: f64) -> Result<Self> {
        if !(s > 0.0 && t > 0.0 && c > 0.0) {
            return Err(LabError::invalid("s, t, C must be positive"));
        }
        Ok(Self { s, t, c })
    }
}

/// Parameters for a length `l' <= a l + b`: `(s/a, t/a, C e^{(2sb + ta + tb)/a})`.
pub fn rescale_params(p: &StarParams, a: f64, b: f64) -> Result<StarParams> {
    if !(a > 0.0) {
        return Err(LabError::invalid("a must be positive"));
    }
    if b < 0.0 {
        return Err(LabError::invalid("b must be nonnegative"));
    }
    let c = p.c * ((2.0 * p.s * b + p.t * a + p.t * b) / a).exp();
    Ok(StarParams { s: p.s / a, t: p.t / a, c })
}

/// Index of the old measure sequence used at new index `n`: `floor((n - b) / a)`.
pub fn rescaled_index(n: f64, a: f64, b: f64) -> i64 {
    ((n - b) / a).floor() as i64
}

/// Parameters for a direct product: `s = t = min(t1/3, t2/3, s1, s2)` and
/// `C = (2 C1 e^{2s} + 2 C2) / (1 - e^{-s})`.
pub fn product_params(p1: &StarParams, p2: &StarParams) -> StarParams {
    let s = (p1.t / 3.0).min(p2.t / 3.0).min(p1.s).min(p2.s);
    let c = (2.0 * p1.c * (2.0 * s).exp() + 2.0 * p2.c) / (1.0 - (-s).exp());
    StarParams { s, t: s, c }
}
