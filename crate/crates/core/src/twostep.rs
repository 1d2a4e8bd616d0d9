//! Two-step representations over finite groups: measures, convolution, sandwich
//! representations, convergence profiles of random-walk powers, and the local estimate
//! comparing a two-step representation with the left regular representation.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt::Debug;
use std::hash::Hash;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{LabError, Result};
use crate::fit::{sequence_decay_fit, ExpFit};
use crate::linalg::{max_abs, spectral_norm, CMat};

/// A finite group given by its multiplication table, with the word length of a symmetric
/// generating set. Element 0 is the identity.
#[derive(Clone, Debug)]
pub struct FiniteGroupModel {
    name: String,
    order: usize,
    table: Vec<u32>,
    inverse: Vec<usize>,
    generators: Vec<usize>,
    length: Vec<u32>,
    labels: Vec<String>,
}

impl FiniteGroupModel {
    /// Closes `generators` under `mul`, breadth first from `identity`. The generating set
    /// must be closed under inverses.
    pub fn from_generators<T, F>(name: &str, identity: T, generators: &[T], mul: F, max_order: usize) -> Result<Self>
    where
        T: Clone + Eq + Hash + Debug,
        F: Fn(&T, &T) -> T,
    {
        let mut index: HashMap<T, usize> = HashMap::new();
        let mut elems = vec![identity.clone()];
        let mut length = vec![0u32];
        index.insert(identity, 0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for s in generators {
                let y = mul(&elems[i], s);
                if !index.contains_key(&y) {
                    if elems.len() == max_order {
                        return Err(LabError::invalid(format!("{name}: group order exceeds {max_order}")));
                    }
                    index.insert(y.clone(), elems.len());
                    elems.push(y);
                    length.push(length[i] + 1);
                    queue.push_back(elems.len() - 1);
                }
            }
        }
        let order = elems.len();
        let mut table = vec![0u32; order * order];
        for (i, x) in elems.iter().enumerate() {
            for (j, y) in elems.iter().enumerate() {
                let k = index
                    .get(&mul(x, y))
                    .ok_or_else(|| LabError::Internal(format!("{name}: product left the closure")))?;
                table[i * order + j] = *k as u32;
            }
        }
        let mut inverse = vec![usize::MAX; order];
        for i in 0..order {
            inverse[i] = (0..order)
                .find(|&j| table[i * order + j] == 0)
                .ok_or_else(|| LabError::Internal(format!("{name}: element without inverse")))?;
        }
        let gens: Vec<usize> = generators.iter().map(|g| index[g]).collect();
        if gens.iter().any(|g| !gens.contains(&inverse[*g])) {
            return Err(LabError::invalid(format!("{name}: generating set is not symmetric")));
        }
        let labels = elems.iter().map(|e| format!("{e:?}")).collect();
        Ok(Self { name: name.to_string(), order, table, inverse, generators: gens, length, labels })
    }

    /// `Z/m` with generators `{1, -1}`.
    pub fn cyclic(m: u32) -> Result<Self> {
        if m == 0 {
            return Err(LabError::invalid("cyclic group needs m >= 1"));
        }
        let mut gens = vec![1 % m, (m - 1) % m];
        gens.dedup();
        gens.retain(|g| *g != 0);
        Self::from_generators(&format!("Z/{m}"), 0u32, &gens, |a, b| (a + b) % m, m as usize)
    }

    /// Dihedral group of order `2n`, generated by a rotation, its inverse and a reflection.
    pub fn dihedral(n: u32) -> Result<Self> {
        if n < 3 {
            return Err(LabError::invalid("dihedral group needs n >= 3"));
        }
        let mul = |a: &(u32, bool), b: &(u32, bool)| {
            let k = if a.1 { (a.0 + n - b.0) % n } else { (a.0 + b.0) % n };
            (k, a.1 ^ b.1)
        };
        Self::from_generators(
            &format!("D{n}"),
            (0, false),
            &[(1, false), (n - 1, false), (0, true)],
            mul,
            2 * n as usize,
        )
    }

    /// Symmetric group on `k` letters with adjacent transpositions.
    pub fn symmetric(k: usize) -> Result<Self> {
        if !(1..=6).contains(&k) {
            return Err(LabError::invalid("symmetric group supported for 1 <= k <= 6"));
        }
        let id: Vec<u8> = (0..k as u8).collect();
        let gens: Vec<Vec<u8>> = (0..k.saturating_sub(1))
            .map(|i| {
                let mut p = id.clone();
                p.swap(i, i + 1);
                p
            })
            .collect();
        let mul = |p: &Vec<u8>, q: &Vec<u8>| q.iter().map(|&i| p[i as usize]).collect::<Vec<u8>>();
        Self::from_generators(&format!("S{k}"), id, &gens, mul, 720)
    }

    /// `SL3(F2)`, order 168, generated by the six elementary matrices.
    pub fn sl3_f2() -> Result<Self> {
        type M = [[u8; 3]; 3];
        let id: M = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
        let mut gens = Vec::new();
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    let mut e = id;
                    e[i][j] = 1;
                    gens.push(e);
                }
            }
        }
        let mul = |a: &M, b: &M| {
            let mut c = [[0u8; 3]; 3];
            for i in 0..3 {
                for j in 0..3 {
                    c[i][j] = (0..3).map(|k| a[i][k] & b[k][j]).fold(0, |x, y| x ^ y);
                }
            }
            c
        };
        Self::from_generators("SL3(F2)", id, &gens, mul, 168)
    }

    /// Model by name: `Z/m`, `Dn`, `Sk`, `SL3(F2)`.
    pub fn by_name(name: &str) -> Result<Self> {
        let bad = || LabError::invalid(format!("unknown group model '{name}'"));
        if name == "SL3(F2)" {
            Self::sl3_f2()
        } else if let Some(m) = name.strip_prefix("Z/") {
            Self::cyclic(m.parse().map_err(|_| bad())?)
        } else if let Some(n) = name.strip_prefix('D') {
            Self::dihedral(n.parse().map_err(|_| bad())?)
        } else if let Some(k) = name.strip_prefix('S') {
            Self::symmetric(k.parse().map_err(|_| bad())?)
        } else {
            Err(bad())
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    /// Word length with respect to the generating set.
    pub fn length(&self, a: usize) -> u32 {
        self.length[a]
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    /// Index of the element whose debug label is `label`.
    pub fn find(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Checks associativity (exhaustive up to order 60, sampled beyond), inverses and the
    /// length axioms.
    pub fn check_axioms(&self, seed: u64) -> Result<()> {
        let n = self.order;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let assoc = |a: usize, b: usize, c: usize| self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c));
        let ok = if n <= 60 {
            (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| assoc(a, b, c))))
        } else {
            (0..10_000).all(|_| {
                let (a, b, c) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                assoc(a, b, c)
            })
        };
        if !ok {
            return Err(LabError::Internal(format!("{}: multiplication is not associative", self.name)));
        }
        for a in 0..n {
            if self.mul(a, 0) != a || self.mul(0, a) != a || self.mul(self.inv(a), a) != 0 {
                return Err(LabError::Internal(format!("{}: identity or inverse fails at {a}", self.name)));
            }
            if self.length(self.inv(a)) != self.length(a) {
                return Err(LabError::Internal(format!("{}: length not symmetric at {a}", self.name)));
            }
            for b in 0..n {
                if self.length(self.mul(a, b)) > self.length(a) + self.length(b) {
                    return Err(LabError::Internal(format!("{}: length not subadditive", self.name)));
                }
            }
        }
        Ok(())
    }

    /// Subgroup generated by `set`, sorted.
    pub fn closure(&self, set: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order];
        seen[0] = true;
        let mut out = vec![0];
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for &s in set {
                let y = self.mul(x, s);
                if !seen[y] {
                    seen[y] = true;
                    out.push(y);
                    queue.push_back(y);
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub fn is_subgroup(&self, set: &[usize]) -> bool {
        let mut sorted = set.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        sorted.len() == set.len() && self.closure(&sorted) == sorted
    }
}

/// A finitely supported real measure on a model, keyed by element index.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FiniteMeasure {
    pub group: String,
    pub atoms: BTreeMap<usize, f64>,
}

impl FiniteMeasure {
    pub fn from_atoms(model: &FiniteGroupModel, atoms: impl IntoIterator<Item = (usize, f64)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (g, w) in atoms {
            if g >= model.order() {
                return Err(LabError::invalid(format!("element {g} outside {}", model.name())));
            }
            if !w.is_finite() {
                return Err(LabError::invalid("non-finite weight"));
            }
            *map.entry(g).or_insert(0.0) += w;
        }
        map.retain(|_, w| *w != 0.0);
        Ok(Self { group: model.name().to_string(), atoms: map })
    }

    pub fn dirac(model: &FiniteGroupModel, g: usize) -> Result<Self> {
        Self::from_atoms(model, [(g, 1.0)])
    }

    pub fn uniform(model: &FiniteGroupModel, set: &[usize]) -> Result<Self> {
        if set.is_empty() {
            return Err(LabError::invalid("uniform measure on an empty set"));
        }
        let w = 1.0 / set.len() as f64;
        Self::from_atoms(model, set.iter().map(|&g| (g, w)))
    }

    /// `(1 - laziness) * uniform(generators) + laziness * delta_e`.
    pub fn lazy_walk(model: &FiniteGroupModel, laziness: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&laziness) || model.generators().is_empty() {
            return Err(LabError::invalid("laziness must lie in [0, 1) and the model needs generators"));
        }
        let w = (1.0 - laziness) / model.generators().len() as f64;
        let atoms = model.generators().iter().map(|&g| (g, w)).chain([(0, laziness)]);
        Self::from_atoms(model, atoms)
    }

    /// Random probability measure on `set` with weights drawn uniformly and normalized.
    pub fn random(model: &FiniteGroupModel, set: &[usize], rng: &mut impl Rng) -> Result<Self> {
        let ws: Vec<f64> = set.iter().map(|_| rng.gen::<f64>() + 1e-3).collect();
        let total: f64 = ws.iter().sum();
        Self::from_atoms(model, set.iter().zip(ws).map(|(&g, w)| (g, w / total)))
    }

    pub fn mass(&self) -> f64 {
        self.atoms.values().sum()
    }

    pub fn is_probability(&self) -> bool {
        self.atoms.values().all(|w| *w >= 0.0) && (self.mass() - 1.0).abs() <= 1e-12
    }

    pub fn support(&self) -> Vec<usize> {
        self.atoms.keys().copied().collect()
    }

    pub fn max_length(&self, model: &FiniteGroupModel) -> u32 {
        self.atoms.keys().map(|&g| model.length(g)).max().unwrap_or(0)
    }

    /// Signed difference `self - other`.
    pub fn sub(&self, other: &FiniteMeasure) -> Result<Self> {
        if self.group != other.group {
            return Err(LabError::invalid("measures live on different groups"));
        }
        let mut atoms = self.atoms.clone();
        for (g, w) in &other.atoms {
            *atoms.entry(*g).or_insert(0.0) -= w;
        }
        atoms.retain(|_, w| *w != 0.0);
        Ok(Self { group: self.group.clone(), atoms })
    }

    fn check_group(&self, model: &FiniteGroupModel) -> Result<()> {
        if self.group != model.name() {
            return Err(LabError::invalid(format!("measure on {} used with {}", self.group, model.name())));
        }
        Ok(())
    }
}

/// `m1 * m2`: the image of `m1 x m2` under multiplication.
pub fn convolve(model: &FiniteGroupModel, m1: &FiniteMeasure, m2: &FiniteMeasure) -> Result<FiniteMeasure> {
    m1.check_group(model)?;
    m2.check_group(model)?;
    let mut atoms = BTreeMap::new();
    for (&a, &wa) in &m1.atoms {
        for (&b, &wb) in &m2.atoms {
            *atoms.entry(model.mul(a, b)).or_insert(0.0) += wa * wb;
        }
    }
    Ok(FiniteMeasure { group: model.name().to_string(), atoms })
}

/// `delta_g * m * delta_h`.
pub fn translate(model: &FiniteGroupModel, g: usize, m: &FiniteMeasure, h: usize) -> Result<FiniteMeasure> {
    m.check_group(model)?;
    let atoms = m.atoms.iter().map(|(&k, &w)| (model.mul(model.mul(g, k), h), w));
    FiniteMeasure::from_atoms(model, atoms)
}

/// `mu^n`, with `mu^0 = delta_e`.
pub fn convolution_powers(model: &FiniteGroupModel, mu: &FiniteMeasure, n: usize) -> Result<Vec<FiniteMeasure>> {
    let mut out = vec![FiniteMeasure::dirac(model, 0)?];
    for k in 0..n {
        out.push(convolve(model, &out[k], mu)?);
    }
    Ok(out)
}

/// A matrix representation `g -> u(g)` of a model.
#[derive(Clone, Debug)]
pub struct GroupRep {
    pub group: String,
    pub mats: Vec<CMat>,
}

impl GroupRep {
    /// Left regular representation, `lambda(g) e_h = e_{gh}`.
    pub fn regular(model: &FiniteGroupModel) -> Self {
        let n = model.order();
        let mats = (0..n)
            .map(|g| {
                let mut m = CMat::zeros(n, n);
                for h in 0..n {
                    m[(model.mul(g, h), h)] = Complex64::new(1.0, 0.0);
                }
                m
            })
            .collect();
        Self { group: model.name().to_string(), mats }
    }

    pub fn trivial(model: &FiniteGroupModel) -> Self {
        Self { group: model.name().to_string(), mats: vec![CMat::identity(1, 1); model.order()] }
    }

    pub fn dim(&self) -> usize {
        self.mats[0].nrows()
    }

    /// `sum_g m(g) u(g)`.
    pub fn apply(&self, m: &FiniteMeasure) -> Result<CMat> {
        if m.group != self.group {
            return Err(LabError::invalid("measure and representation live on different groups"));
        }
        Ok(weighted_sum(&self.mats, m))
    }

    /// `max |u(gh) - u(g) u(h)|` over all pairs.
    pub fn homomorphism_residual(&self, model: &FiniteGroupModel) -> f64 {
        let n = model.order();
        let mut r: f64 = 0.0;
        for g in 0..n {
            for h in 0..n {
                r = r.max(max_abs(&(&self.mats[model.mul(g, h)] - &self.mats[g] * &self.mats[h])));
            }
        }
        r
    }
}

fn weighted_sum(mats: &[CMat], m: &FiniteMeasure) -> CMat {
    let (r, c) = mats[0].shape();
    let mut out = CMat::zeros(r, c);
    for (&g, &w) in &m.atoms {
        out += &mats[g] * Complex64::new(w, 0.0);
    }
    out
}

/// Maps `pi0(g): X0 -> X1` and `pi1(g): X1 -> X2` with `pi1(gg') pi0(g'') = pi1(g) pi0(g'g'')`,
/// and a growth certificate `|pi_i(g)| <= L e^{s l(g)}`.
#[derive(Clone, Debug)]
pub struct TwoStepRep {
    pub group: String,
    pub dims: [usize; 3],
    pub pi0: Vec<CMat>,
    pub pi1: Vec<CMat>,
    pub l: f64,
    pub s: f64,
}

impl TwoStepRep {
    /// `pi(g) = pi1(g) pi0(e)`.
    pub fn pi(&self, g: usize) -> CMat {
        &self.pi1[g] * &self.pi0[0]
    }

    pub fn apply_pi0(&self, m: &FiniteMeasure) -> Result<CMat> {
        self.check(m)?;
        Ok(weighted_sum(&self.pi0, m))
    }

    pub fn apply_pi1(&self, m: &FiniteMeasure) -> Result<CMat> {
        self.check(m)?;
        Ok(weighted_sum(&self.pi1, m))
    }

    /// `pi(m) = sum_g m(g) pi(g)`.
    pub fn apply(&self, m: &FiniteMeasure) -> Result<CMat> {
        Ok(self.apply_pi1(m)? * &self.pi0[0])
    }

    fn check(&self, m: &FiniteMeasure) -> Result<()> {
        if m.group != self.group {
            return Err(LabError::invalid("measure and representation live on different groups"));
        }
        Ok(())
    }

    /// Largest entry of `pi1(gg') pi0(g'') - pi1(g) pi0(g'g'')`: exhaustive up to order 60,
    /// otherwise on `samples` random triples.
    pub fn relation_residual(&self, model: &FiniteGroupModel, samples: usize, seed: u64) -> f64 {
        let n = model.order();
        if n <= 60 {
            let pair: Vec<CMat> = (0..n * n).map(|k| &self.pi1[k / n] * &self.pi0[k % n]).collect();
            let mut r: f64 = 0.0;
            for g in 0..n {
                for g1 in 0..n {
                    for g2 in 0..n {
                        let lhs = &pair[model.mul(g, g1) * n + g2];
                        let rhs = &pair[g * n + model.mul(g1, g2)];
                        r = r.max(max_abs(&(lhs - rhs)));
                    }
                }
            }
            r
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..samples)
                .map(|_| {
                    let (g, g1, g2) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                    let lhs = &self.pi1[model.mul(g, g1)] * &self.pi0[g2];
                    let rhs = &self.pi1[g] * &self.pi0[model.mul(g1, g2)];
                    max_abs(&(lhs - rhs))
                })
                .fold(0.0, f64::max)
        }
    }

    /// `max_g max_i |pi_i(g)| / (L e^{s l(g)})`; at most 1 when the certificate holds.
    pub fn growth_ratio(&self, model: &FiniteGroupModel) -> f64 {
        (0..model.order())
            .map(|g| {
                let cap = self.l * (self.s * model.length(g) as f64).exp();
                spectral_norm(&self.pi0[g]).max(spectral_norm(&self.pi1[g])) / cap
            })
            .fold(0.0, f64::max)
    }
}

/// `pi0(g) = u'(g) A`, `pi1(g) = B u'(g)` with `u' = W u W^{-1}` and `W = diag(weights)`.
///
/// `L = max(|A|, |B|)` and `s` is the smallest rate with `|u'(g)| <= e^{s l(g)}`.
pub fn sandwich_twostep(
    model: &FiniteGroupModel,
    u: &GroupRep,
    a: &CMat,
    b: &CMat,
    weights: Option<&[f64]>,
) -> Result<TwoStepRep> {
    let d1 = u.dim();
    if u.group != model.name() || u.mats.len() != model.order() {
        return Err(LabError::invalid("representation does not belong to the model"));
    }
    if a.nrows() != d1 || b.ncols() != d1 {
        return Err(LabError::invalid(format!(
            "dimension mismatch: A is {}x{}, B is {}x{}, representation has dim {d1}",
            a.nrows(),
            a.ncols(),
            b.nrows(),
            b.ncols()
        )));
    }
    let conj: Vec<CMat> = match weights {
        None => u.mats.clone(),
        Some(w) => {
            if w.len() != d1 || w.iter().any(|x| !(*x > 0.0) || !x.is_finite()) {
                return Err(LabError::invalid("weights must be positive, one per basis vector"));
            }
            u.mats.iter().map(|m| CMat::from_fn(d1, d1, |i, j| m[(i, j)] * (w[i] / w[j]))).collect()
        }
    };
    let mut s: f64 = 0.0;
    for (g, m) in conj.iter().enumerate().skip(1) {
        let growth = monomial_norm(m).unwrap_or_else(|| spectral_norm(m)).ln();
        if growth > 1e-12 {
            s = s.max(growth / model.length(g) as f64);
        }
    }
    let l = spectral_norm(a).max(spectral_norm(b));
    Ok(TwoStepRep {
        group: model.name().to_string(),
        dims: [a.ncols(), d1, b.nrows()],
        pi0: conj.iter().map(|m| m * a).collect(),
        pi1: conj.iter().map(|m| b * m).collect(),
        l,
        s,
    })
}

/// Norm of a matrix with at most one nonzero entry per row and per column.
fn monomial_norm(m: &CMat) -> Option<f64> {
    let mut rows = vec![false; m.nrows()];
    let mut best: f64 = 0.0;
    for j in 0..m.ncols() {
        let mut seen = false;
        for i in 0..m.nrows() {
            let z = m[(i, j)].norm();
            if z != 0.0 {
                if seen || rows[i] {
                    return None;
                }
                seen = true;
                rows[i] = true;
                best = best.max(z);
            }
        }
    }
    Some(best)
}

/// Averaging projection onto the constants in the regular representation.
pub fn regular_projection(model: &FiniteGroupModel) -> CMat {
    let n = model.order();
    CMat::from_element(n, n, Complex64::new(1.0 / n as f64, 0.0))
}

/// Largest entry among `P^2 - P`, `P lambda(g) - P`, `lambda(g) P - P` over all `g`.
pub fn kazhdan_projection_residual(model: &FiniteGroupModel) -> f64 {
    let p = regular_projection(model);
    let reg = GroupRep::regular(model);
    let mut r = max_abs(&(&p * &p - &p));
    for m in &reg.mats {
        r = r.max(max_abs(&(&p * m - &p))).max(max_abs(&(m * &p - &p)));
    }
    r
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct GapProfile {
    /// `|lambda(mu^n) - P|` for `n = 1..=N`.
    pub values: Vec<f64>,
    pub generating: bool,
    pub nonincreasing: bool,
    pub fit: Option<ExpFit>,
    /// `e^{-rate}` of the fit.
    pub rho: Option<f64>,
}

/// `|lambda(mu^n) - P|` on the regular representation for `n = 1..=horizon`.
pub fn spectral_gap_profile(model: &FiniteGroupModel, mu: &FiniteMeasure, horizon: usize) -> Result<GapProfile> {
    mu.check_group(model)?;
    if !mu.is_probability() {
        return Err(LabError::invalid("spectral gap profile needs a probability measure"));
    }
    if model.order() > 400 {
        return Err(LabError::invalid("regular representation capped at order 400"));
    }
    let generating = model.closure(&mu.support()).len() == model.order();
    let p = regular_projection(model);
    let step = GroupRep::regular(model).apply(mu)? - &p;
    let mut power = step.clone();
    let mut values = Vec::with_capacity(horizon);
    for n in 1..=horizon {
        if n > 1 {
            power = &power * &step;
        }
        values.push(spectral_norm(&power));
    }
    let nonincreasing = values.windows(2).all(|w| w[1] <= w[0] + 1e-12);
    let fit = sequence_decay_fit(&values);
    Ok(GapProfile { rho: fit.map(|f| (-f.rate).exp()), values, generating, nonincreasing, fit })
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct InvarianceResidual {
    pub g: usize,
    pub g_prime: usize,
    pub length_sum: u32,
    /// `|pi(delta_g m_n delta_g') - pi(m_n)|` for `n = 0..=N`.
    pub values: Vec<f64>,
    pub fitted_t: Option<f64>,
    pub rate_matches: bool,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct StarReport {
    /// `|pi(m_n) - pi(m_{n+1})|` for `n = 0..N`.
    pub cauchy_diffs: Vec<f64>,
    /// `|pi(m_n) - P|` for `n = 0..=N` when the limit is known.
    pub limit_distances: Option<Vec<f64>>,
    pub invariance_residuals: Vec<InvarianceResidual>,
    /// Fit of the limit distances (or Cauchy differences) as `C L^2 e^{-tn}`.
    #[serde(rename = "fittedC")]
    pub fitted_c: Option<f64>,
    pub fitted_t: Option<f64>,
    pub pass: bool,
    pub notes: Vec<String>,
}

/// Relative tolerance on translated-residual decay rates.
pub const RATE_TOLERANCE: f64 = 0.1;

/// Computes the Cauchy differences of `pi(m_n)`, distances to `limit`, and translated
/// residuals for each pair in `pairs`, with exponential fits. `measures[n]` is `m_n`.
pub fn verify_star_instance(
    model: &FiniteGroupModel,
    rep: &TwoStepRep,
    measures: &[FiniteMeasure],
    pairs: &[(usize, usize)],
    limit: Option<&CMat>,
) -> Result<StarReport> {
    if measures.len() < 3 {
        return Err(LabError::invalid("need at least m_0, m_1, m_2"));
    }
    for (n, m) in measures.iter().enumerate() {
        if m.max_length(model) as usize > n {
            return Err(LabError::invalid(format!("m_{n} is not supported in the ball of radius {n}")));
        }
    }
    let ops: Vec<CMat> = measures.iter().map(|m| rep.apply(m)).collect::<Result<_>>()?;
    let cauchy: Vec<f64> = ops.windows(2).map(|w| spectral_norm(&(&w[0] - &w[1]))).collect();
    let distances: Option<Vec<f64>> = limit.map(|p| ops.iter().map(|op| spectral_norm(&(op - p))).collect());
    let mut notes = Vec::new();
    let fit = match &distances {
        Some(d) => sequence_decay_fit(&d[1..]),
        None => sequence_decay_fit(&cauchy),
    };
    let l2 = rep.l * rep.l;
    let (fitted_c, fitted_t) = match fit {
        Some(f) if f.rate > 0.0 => (Some(f.constant / l2), Some(f.rate)),
        Some(f) => {
            notes.push(format!("no decay detected: fitted rate {}", f.rate));
            (None, None)
        }
        None => {
            notes.push("too few points above the noise floor to fit".into());
            (None, None)
        }
    };
    let mut residuals = Vec::new();
    for &(g, h) in pairs {
        let values: Vec<f64> = measures
            .iter()
            .zip(&ops)
            .map(|(m, op)| Ok(spectral_norm(&(rep.apply(&translate(model, g, m, h)?)? - op))))
            .collect::<Result<_>>()?;
        let vanishing = values.iter().all(|v| *v <= 1e-12);
        let t = if vanishing { None } else { sequence_decay_fit(&values[1..]).map(|f| f.rate) };
        let rate_matches =
            vanishing || matches!((t, fitted_t), (Some(a), Some(b)) if (a - b).abs() <= RATE_TOLERANCE * b);
        if !rate_matches {
            notes.push(format!("translated residual ({g}, {h}) decays at {t:?}, expected {fitted_t:?}"));
        }
        residuals.push(InvarianceResidual {
            g,
            g_prime: h,
            length_sum: model.length(g) + model.length(h),
            values,
            fitted_t: t,
            rate_matches,
        });
    }
    if let (Some(d), Some(_)) = (&distances, limit) {
        notes.push(format!("distance to the limit at the horizon: {:e}", d[d.len() - 1]));
    }
    let pass = fitted_t.is_some() && residuals.iter().all(|r| r.rate_matches);
    Ok(StarReport {
        cauchy_diffs: cauchy,
        limit_distances: distances,
        invariance_residuals: residuals,
        fitted_c,
        fitted_t,
        pass,
        notes,
    })
}

/// A sandwich instance over the regular representation with a lazy random walk.
#[derive(Clone, Debug)]
pub struct StarInstance {
    pub rep: TwoStepRep,
    pub measures: Vec<FiniteMeasure>,
    /// `B W P_reg W^{-1} A`.
    pub limit: CMat,
}

/// Builds `A = scale A0`, `B = scale B0` with `|A0| = |B0| = 1` drawn from `seed`, regular
/// representation weighted by `e^{weight_rate l(h)}`, and `m_n = mu^n` for the lazy walk `mu`.
pub fn sandwich_star_instance(
    model: &FiniteGroupModel,
    scale: f64,
    weight_rate: f64,
    dims: (usize, usize),
    horizon: usize,
    seed: u64,
) -> Result<StarInstance> {
    if !(scale > 0.0) || !(weight_rate >= 0.0) || dims.0 == 0 || dims.1 == 0 {
        return Err(LabError::invalid("scale must be positive, weight rate nonnegative, dims nonzero"));
    }
    let n = model.order();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut unit = |r: usize, c: usize| {
        let m = CMat::from_fn(r, c, |_, _| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5));
        let norm = spectral_norm(&m);
        m / Complex64::new(norm / scale, 0.0)
    };
    let a = unit(n, dims.0);
    let b = unit(dims.1, n);
    let w: Vec<f64> = (0..n).map(|h| (weight_rate * model.length(h) as f64).exp()).collect();
    let rep = sandwich_twostep(model, &GroupRep::regular(model), &a, &b, Some(&w))?;
    let mu = FiniteMeasure::lazy_walk(model, 0.5)?;
    let measures = convolution_powers(model, &mu, horizon)?;
    let p = regular_projection(model);
    let pw = CMat::from_fn(n, n, |i, j| p[(i, j)] * (w[i] / w[j]));
    Ok(StarInstance { rep, measures, limit: &b * pw * &a })
}

#[derive(Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LocalEstimate {
    pub lhs: f64,
    /// `sup_k |pi1(g1 k)| sup_k |pi0(k^{-1} g2)| |lambda_K(mu - mu')|`.
    pub rhs: f64,
    /// `L^2 e^{s (l(g1) + l(g2) + 2 max_K l)} |lambda_K(mu - mu')|`, never below `rhs`.
    pub growth_rhs: f64,
    pub pass: bool,
}

/// Compares `|pi(delta_g1 (mu - mu') delta_g2)|` with the left regular representation of
/// the subgroup `k_set` evaluated at `mu - mu'`.
pub fn local_estimate_check(
    model: &FiniteGroupModel,
    rep: &TwoStepRep,
    k_set: &[usize],
    mu: &FiniteMeasure,
    mu2: &FiniteMeasure,
    g1: usize,
    g2: usize,
) -> Result<LocalEstimate> {
    if !model.is_subgroup(k_set) {
        return Err(LabError::invalid("K is not a subgroup"));
    }
    if !mu.is_probability() || !mu2.is_probability() {
        return Err(LabError::invalid("mu and mu' must be probability measures"));
    }
    let pos: HashMap<usize, usize> = k_set.iter().enumerate().map(|(i, &k)| (k, i)).collect();
    if mu.support().iter().chain(mu2.support().iter()).any(|k| !pos.contains_key(k)) {
        return Err(LabError::invalid("measures must be supported in K"));
    }
    let nu = mu.sub(mu2)?;
    let lhs = spectral_norm(&rep.apply(&translate(model, g1, &nu, g2)?)?);
    let nk = k_set.len();
    let mut lam = DMatrix::<f64>::zeros(nk, nk);
    for (&k, &w) in &nu.atoms {
        for (j, &x) in k_set.iter().enumerate() {
            lam[(pos[&model.mul(k, x)], j)] += w;
        }
    }
    let lam_norm = if nu.atoms.is_empty() { 0.0 } else { lam.singular_values().max() };
    let sup1 = k_set.iter().map(|&k| spectral_norm(&rep.pi1[model.mul(g1, k)])).fold(0.0, f64::max);
    let sup0 = k_set.iter().map(|&k| spectral_norm(&rep.pi0[model.mul(model.inv(k), g2)])).fold(0.0, f64::max);
    let rhs = sup1 * sup0 * lam_norm;
    let lk = k_set.iter().map(|&k| model.length(k)).max().unwrap_or(0);
    let exponent = rep.s * (model.length(g1) + model.length(g2) + 2 * lk) as f64;
    let growth_rhs = rep.l * rep.l * exponent.exp() * lam_norm;
    Ok(LocalEstimate { lhs, rhs, growth_rhs, pass: lhs <= rhs + 1e-10 })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CuspBound {
    /// Upper bound on `1 - |Omega_{n+1}|`.
    pub deficit: f64,
    /// Lower bound on `|Omega_{n+1}|`.
    pub mass: f64,
}

/// From `|Omega_1| (1 - |Omega_{n+1}|) <= eps_n`: `1 - |Omega_{n+1}| <= eps_n / |Omega_1|`.
pub fn cusp_measure_bound(omega1_mass: f64, gap_profile: &[f64]) -> Result<Vec<CuspBound>> {
    if !(omega1_mass > 0.0 && omega1_mass <= 1.0) {
        return Err(LabError::invalid(format!("|Omega_1| = {omega1_mass} must lie in (0, 1]")));
    }
    Ok(gap_profile
        .iter()
        .map(|e| {
            let deficit = (e / omega1_mass).clamp(0.0, 1.0);
            CuspBound { deficit, mass: 1.0 - deficit }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn model_orders_and_axioms() {
        for (m, order) in [
            (FiniteGroupModel::cyclic(5).unwrap(), 5),
            (FiniteGroupModel::dihedral(4).unwrap(), 8),
            (FiniteGroupModel::symmetric(3).unwrap(), 6),
            (FiniteGroupModel::symmetric(4).unwrap(), 24),
            (FiniteGroupModel::sl3_f2().unwrap(), 168),
        ] {
            assert_eq!(m.order(), order, "{}", m.name());
            m.check_axioms(1).unwrap();
        }
        assert_eq!(FiniteGroupModel::by_name("Z/7").unwrap().order(), 7);
        assert!(FiniteGroupModel::by_name("Q8").is_err());
    }

    #[test]
    fn convolution_examples() {
        let z2 = FiniteGroupModel::cyclic(2).unwrap();
        let u = FiniteMeasure::uniform(&z2, &[0, 1]).unwrap();
        assert_eq!(convolve(&z2, &u, &u).unwrap(), u);
        let e = FiniteMeasure::dirac(&z2, 0).unwrap();
        assert_eq!(convolve(&z2, &e, &u).unwrap(), u);
        let z3 = FiniteGroupModel::cyclic(3).unwrap();
        let d = FiniteMeasure::dirac(&z3, 0).unwrap();
        assert!(convolve(&z2, &u, &d).is_err());
    }

    #[test]
    fn spectral_gap_closed_forms() {
        let z2 = FiniteGroupModel::cyclic(2).unwrap();
        let lazy = FiniteMeasure::lazy_walk(&z2, 0.5).unwrap();
        let prof = spectral_gap_profile(&z2, &lazy, 5).unwrap();
        assert!(prof.values.iter().all(|v| *v < 1e-15));

        let z3 = FiniteGroupModel::cyclic(3).unwrap();
        let mu = FiniteMeasure::uniform(&z3, z3.generators()).unwrap();
        let prof = spectral_gap_profile(&z3, &mu, 30).unwrap();
        for (k, v) in prof.values.iter().enumerate() {
            assert!((v - 0.5f64.powi(k as i32 + 1)).abs() < 1e-12);
        }
        assert!(prof.generating && prof.nonincreasing);
    }

    #[test]
    fn non_generating_support_is_reported() {
        let z4 = FiniteGroupModel::cyclic(4).unwrap();
        let two = z4.find("2").unwrap();
        let mu = FiniteMeasure::uniform(&z4, &[0, two]).unwrap();
        let prof = spectral_gap_profile(&z4, &mu, 4).unwrap();
        assert!(!prof.generating);
        assert!(prof.values[3] > 0.5);
    }

    #[test]
    fn sandwich_growth_certificates() {
        let s3 = FiniteGroupModel::symmetric(3).unwrap();
        let reg = GroupRep::regular(&s3);
        let a = CMat::identity(6, 6) * Complex64::new(2.0, 0.0);
        let b = CMat::identity(6, 6) * Complex64::new(3.0, 0.0);
        let rep = sandwich_twostep(&s3, &reg, &a, &b, None).unwrap();
        assert!((rep.l - 3.0).abs() < 1e-12 && rep.s == 0.0);
        assert!(rep.relation_residual(&s3, 0, 0) < 1e-12);

        let w: Vec<f64> = (0..6).map(|h| (0.3 * s3.length(h) as f64).exp()).collect();
        let rep = sandwich_twostep(&s3, &reg, &a, &b, Some(&w)).unwrap();
        assert!(rep.s > 0.0 && rep.s <= 0.3 + 1e-12);
        assert!(rep.growth_ratio(&s3) <= 1.0 + 1e-12);
        assert!(rep.relation_residual(&s3, 0, 0) < 1e-12);

        assert!(sandwich_twostep(&s3, &reg, &CMat::identity(5, 5), &b, None).is_err());
    }

    #[test]
    fn composition_contract() {
        let s3 = FiniteGroupModel::symmetric(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let inst = sandwich_star_instance(&s3, 2.0, 0.2, (2, 3), 3, 9).unwrap();
        let all: Vec<usize> = (0..6).collect();
        let m1 = FiniteMeasure::random(&s3, &all, &mut rng).unwrap();
        let m2 = FiniteMeasure::random(&s3, &all, &mut rng).unwrap();
        let lhs = inst.rep.apply(&convolve(&s3, &m1, &m2).unwrap()).unwrap();
        let rhs = inst.rep.apply_pi1(&m1).unwrap() * inst.rep.apply_pi0(&m2).unwrap();
        assert!(max_abs(&(lhs - rhs)) < 1e-12);
    }

    #[test]
    fn local_estimate_examples() {
        let z4 = FiniteGroupModel::cyclic(4).unwrap();
        let inst = sandwich_star_instance(&z4, 1.0, 0.0, (2, 2), 2, 3).unwrap();
        let all: Vec<usize> = (0..4).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mu = FiniteMeasure::random(&z4, &all, &mut rng).unwrap();
        let same = local_estimate_check(&z4, &inst.rep, &all, &mu, &mu, 1, 2).unwrap();
        assert_eq!(same.lhs, 0.0);
        let mu2 = FiniteMeasure::random(&z4, &all, &mut rng).unwrap();
        let est = local_estimate_check(&z4, &inst.rep, &all, &mu, &mu2, 0, 0).unwrap();
        assert!(est.pass && est.rhs <= est.growth_rhs + 1e-12);
    }

    #[test]
    fn cusp_bound_examples() {
        let eps: Vec<f64> = (1..=5).map(|n| 0.5f64.powi(n)).collect();
        let b = cusp_measure_bound(0.1, &eps).unwrap();
        assert_eq!(b[0].deficit, 1.0);
        assert!((b[4].deficit - 10.0 * 0.5f64.powi(5)).abs() < 1e-15);
        assert_eq!(cusp_measure_bound(0.3, &[0.0]).unwrap()[0].mass, 1.0);
        assert!(cusp_measure_bound(0.0, &eps).is_err());
    }
}
