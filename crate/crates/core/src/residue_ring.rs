//! Residue rings `Z/p^n` and the additive characters of their underlying groups.

use num_complex::Complex64;
use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::error::{LabError, Result};

/// The ring `O_n = Z/p^n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ResidueRing {
    p: u64,
    n: u32,
}

impl ResidueRing {
    pub fn new(p: u64, n: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(LabError::invalid(format!("{p} is not prime")));
        }
        if n == 0 {
            return Err(LabError::invalid("ring level must be at least 1"));
        }
        if (n as f64) * (p as f64).log2() > 62.0 {
            return Err(LabError::invalid("modulus does not fit in 62 bits"));
        }
        Ok(Self { p, n })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn level(&self) -> u32 {
        self.n
    }

    pub fn modulus(&self) -> u64 {
        self.p.pow(self.n)
    }

    /// Canonical element with representative `value mod p^n`.
    pub fn elem(&self, value: i64) -> RingElem {
        let m = self.modulus() as i128;
        let v = (value as i128).rem_euclid(m) as u64;
        RingElem { ring: *self, value: v }
    }

    pub fn elements(&self) -> impl Iterator<Item = RingElem> + '_ {
        (0..self.modulus()).map(move |v| RingElem { ring: *self, value: v })
    }

    /// The ring at a different level over the same prime.
    pub fn with_level(&self, n: u32) -> Result<Self> {
        Self::new(self.p, n)
    }

    /// `p`-adic valuation of a representative, with `v(0) = n`.
    pub fn valuation(&self, value: u64) -> u32 {
        let value = value % self.modulus();
        if value == 0 {
            return self.n;
        }
        let mut v = 0;
        let mut x = value;
        while x % self.p == 0 {
            x /= self.p;
            v += 1;
        }
        v
    }

    /// Injection `O_h -> O_n`, `z -> p^{n-h} z`.
    pub fn embed(&self, z: RingElem) -> Result<RingElem> {
        let h = z.ring.n;
        if z.ring.p != self.p || h > self.n {
            return Err(LabError::invalid("cannot embed a ring of higher level"));
        }
        let shift = self.p.pow(self.n - h);
        Ok(RingElem { ring: *self, value: z.value * shift })
    }

    /// Reduction `O_n -> O_d` for `d <= n`.
    pub fn reduce(&self, z: RingElem, d: u32) -> Result<RingElem> {
        if z.ring != *self || d > self.n || d == 0 {
            return Err(LabError::invalid("bad reduction target"));
        }
        let target = Self::new(self.p, d)?;
        Ok(RingElem { ring: target, value: z.value % target.modulus() })
    }
}

/// Element of a residue ring with representative in `[0, p^n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RingElem {
    ring: ResidueRing,
    value: u64,
}

impl RingElem {
    pub fn ring(&self) -> ResidueRing {
        self.ring
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn valuation(&self) -> u32 {
        self.ring.valuation(self.value)
    }

    fn check(&self, other: &RingElem) -> Result<()> {
        if self.ring != other.ring {
            return Err(LabError::invalid("ring mismatch"));
        }
        Ok(())
    }

    pub fn add(&self, other: &RingElem) -> Result<RingElem> {
        self.check(other)?;
        let m = self.ring.modulus();
        Ok(RingElem { ring: self.ring, value: (self.value + other.value) % m })
    }

    pub fn sub(&self, other: &RingElem) -> Result<RingElem> {
        self.check(other)?;
        let m = self.ring.modulus();
        Ok(RingElem { ring: self.ring, value: (self.value + m - other.value) % m })
    }

    pub fn mul(&self, other: &RingElem) -> Result<RingElem> {
        self.check(other)?;
        let m = self.ring.modulus() as u128;
        let v = (self.value as u128 * other.value as u128) % m;
        Ok(RingElem { ring: self.ring, value: v as u64 })
    }

    pub fn neg(&self) -> RingElem {
        let m = self.ring.modulus();
        RingElem { ring: self.ring, value: (m - self.value) % m }
    }
}

/// Additive character `chi_a(z) = exp(2 pi i a z / p^h)` of `O_h`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AdditiveCharacter {
    ring: ResidueRing,
    index: u64,
}

impl AdditiveCharacter {
    pub fn new(ring: ResidueRing, index: i64) -> Self {
        Self { ring, index: ring.elem(index).value }
    }

    pub fn ring(&self) -> ResidueRing {
        self.ring
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    pub fn is_trivial(&self) -> bool {
        self.index == 0
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.index % self.ring.p != 0
    }

    /// Evaluation at a raw representative; callers guarantee the level.
    pub fn eval_raw(&self, z: u64) -> Complex64 {
        let m = self.ring.modulus() as u128;
        let phase = ((self.index as u128 * z as u128) % m) as f64 / m as f64;
        Complex64::from_polar(1.0, 2.0 * PI * phase)
    }

    pub fn product(&self, other: &AdditiveCharacter) -> Result<AdditiveCharacter> {
        if self.ring != other.ring {
            return Err(LabError::invalid("characters live on different rings"));
        }
        Ok(Self::new(self.ring, (self.index + other.index) as i64))
    }

    pub fn conj(&self) -> AdditiveCharacter {
        Self::new(self.ring, -(self.index as i64))
    }

    pub fn all(ring: ResidueRing) -> impl Iterator<Item = AdditiveCharacter> {
        (0..ring.modulus()).map(move |a| AdditiveCharacter { ring, index: a })
    }
}

pub fn char_eval(chi: &AdditiveCharacter, z: &RingElem) -> Result<Complex64> {
    if chi.ring != z.ring {
        return Err(LabError::invalid(format!(
            "character on level {} evaluated at element of level {}",
            chi.ring.n, z.ring.n
        )));
    }
    Ok(chi.eval_raw(z.value))
}

/// Result of splitting off the part of `O_h` on which a character is trivial.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CharacterClass {
    pub degenerate: bool,
    /// Level `d` of the ring through which the character factors.
    pub level: u32,
    /// The nondegenerate character on `O_d`.
    pub reduced: AdditiveCharacter,
}

/// `chi_a` with `a = p^m a'`, `p` not dividing `a'`, factors through `O_h -> O_{h-m}`
/// as the nondegenerate character `chi_{a'}`.
pub fn classify_character(chi: &AdditiveCharacter) -> Result<CharacterClass> {
    if chi.is_trivial() {
        return Err(LabError::invalid("the trivial character has no reduction"));
    }
    let m = chi.ring.valuation(chi.index);
    let d = chi.ring.n - m;
    let reduced_ring = chi.ring.with_level(d)?;
    let reduced = AdditiveCharacter::new(reduced_ring, (chi.index / chi.ring.p.pow(m)) as i64);
    Ok(CharacterClass { degenerate: m > 0, level: d, reduced })
}

/// Coefficients `t_chi` with `sum_chi t_chi chi(z) = p^h (1{z=a} - 1{z=b})`.
///
/// With `chi_c(z) = exp(2 pi i c z / p^h)` orthogonality gives
/// `t_{chi_c} = conj(chi_c(a)) - conj(chi_c(b))`.
pub fn character_decompose(a: &RingElem, b: &RingElem) -> Result<BTreeMap<AdditiveCharacter, Complex64>> {
    a.check(b)?;
    let ring = a.ring;
    Ok(AdditiveCharacter::all(ring)
        .map(|chi| (chi, chi.eval_raw(a.value).conj() - chi.eval_raw(b.value).conj()))
        .collect())
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}
