//! Arithmetic of levels and congruence subgroups.
//!
//! Divisor sums, the degree `d_n` of `M_1(n) -> M_ell`, cusp counts and genera of
//! `X_1(n)`, the tameness predicate, and the weighted projective line data that
//! replaces curve invariants for the stacky levels `n <= 4`.

use num_integer::Integer;
use num_rational::Rational64;
use serde::Serialize;

use crate::{Error, Result};

/// Largest level accepted by the public entry points.
pub const MAX_LEVEL: u64 = 1_000_000;

fn check_level(n: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidLevel(n));
    }
    if n > MAX_LEVEL {
        return Err(Error::LevelTooLarge { n, max: MAX_LEVEL });
    }
    Ok(())
}

/// Prime factorization by trial division, primes in increasing order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut k = 0;
            while n.is_multiple_of(p) {
                n /= p;
                k += 1;
            }
            out.push((p, k));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n) == [(n, 1)]
}

/// All positive divisors of `n`, sorted.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut ds = vec![1u64];
    for (p, k) in factorize(n) {
        let len = ds.len();
        let mut pk = 1;
        for _ in 0..k {
            pk *= p;
            for i in 0..len {
                ds.push(ds[i] * pk);
            }
        }
    }
    ds.sort_unstable();
    ds
}

/// Euler's totient.
pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .map(|(p, k)| (p - 1) * p.pow(k - 1))
        .product()
}

/// `f(n) = sum_{d | n} d phi(d) phi(n/d)`, the degree `d_n`.
pub fn dsum_f(n: u64) -> u64 {
    divisors(n)
        .into_iter()
        .map(|d| d * euler_phi(d) * euler_phi(n / d))
        .sum()
}

/// `g(n) = sum_{d | n} phi(d) phi(n/d)`, twice the number of cusps.
pub fn dsum_g(n: u64) -> u64 {
    divisors(n)
        .into_iter()
        .map(|d| euler_phi(d) * euler_phi(n / d))
        .sum()
}

/// `n^2 prod_{p | n} (1 - 1/p^2)`, evaluated prime by prime.
pub fn degree_euler_product(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .map(|(p, k)| p.pow(2 * k - 2) * (p * p - 1))
        .product()
}

pub fn is_squarefree(n: u64) -> bool {
    factorize(n).iter().all(|&(_, k)| k == 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SubgroupKind {
    Gamma1,
    Gamma0,
    GammaFull,
    Intermediate,
}

/// A congruence subgroup of level `n`.
///
/// For `Gamma1`, `Gamma0` and `Intermediate` the field `subgroup` lists the
/// image of `Gamma` in `(Z/n)^x` as sorted unit residues. It is empty for
/// `GammaFull`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelSpec {
    pub n: u64,
    pub kind: SubgroupKind,
    pub subgroup: Vec<u64>,
}

fn units(n: u64) -> Vec<u64> {
    if n == 1 {
        return vec![0];
    }
    (1..n).filter(|k| k.gcd(&n) == 1).collect()
}

impl LevelSpec {
    pub fn gamma1(n: u64) -> Result<Self> {
        check_level(n)?;
        Ok(Self { n, kind: SubgroupKind::Gamma1, subgroup: vec![1 % n] })
    }

    pub fn gamma0(n: u64) -> Result<Self> {
        check_level(n)?;
        let subgroup = units(n);
        debug_assert_eq!(subgroup.len() as u64, euler_phi(n));
        Ok(Self { n, kind: SubgroupKind::Gamma0, subgroup })
    }

    pub fn full(n: u64) -> Result<Self> {
        check_level(n)?;
        Ok(Self { n, kind: SubgroupKind::GammaFull, subgroup: Vec::new() })
    }

    /// `Gamma_1(n) ⊆ Gamma ⊆ Gamma_0(n)` given by its residues in `(Z/n)^x`.
    pub fn intermediate(n: u64, residues: &[u64]) -> Result<Self> {
        check_level(n)?;
        let bad = |reason: String| Error::InvalidSubgroup { n, reason };
        let mut subgroup: Vec<u64> = residues.iter().map(|r| r % n).collect();
        subgroup.sort_unstable();
        subgroup.dedup();
        if !subgroup.contains(&(1 % n)) {
            return Err(bad("does not contain 1".into()));
        }
        if let Some(r) = subgroup.iter().find(|r| r.gcd(&n) != 1 && n > 1) {
            return Err(bad(format!("{r} is not a unit")));
        }
        for &a in &subgroup {
            for &b in &subgroup {
                if subgroup.binary_search(&(a * b % n)).is_err() {
                    return Err(bad(format!("not closed: {a}*{b}")));
                }
            }
        }
        Ok(Self { n, kind: SubgroupKind::Intermediate, subgroup })
    }

    /// The index `[Gamma : Gamma_1(n)]`, undefined for the full level structure.
    pub fn index_over_gamma1(&self) -> Option<u64> {
        match self.kind {
            SubgroupKind::GammaFull => None,
            _ => Some(self.subgroup.len() as u64),
        }
    }
}

/// Tameness of `spec` at the prime `l`.
pub fn is_tame(spec: &LevelSpec, l: u64) -> Result<bool> {
    if !is_prime(l) {
        return Err(Error::NotPrime(l));
    }
    if spec.n < 2 || spec.n.is_multiple_of(l) {
        return Ok(false);
    }
    Ok(match spec.kind {
        SubgroupKind::Gamma0 | SubgroupKind::Intermediate => {
            let index = spec.index_over_gamma1().unwrap_or(1);
            !6u64.gcd(&index).is_multiple_of(l)
        }
        SubgroupKind::Gamma1 | SubgroupKind::GammaFull => true,
    })
}

/// Weighted projective line `P(a, b)` modelling `M_1(n)` for `n <= 4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StackyData {
    pub n: u64,
    pub weights: (u32, u32),
}

impl StackyData {
    pub fn for_level(n: u64) -> Option<Self> {
        let weights = match n {
            1 => (4, 6),
            2 => (2, 4),
            3 => (1, 3),
            4 => (1, 2),
            _ => return None,
        };
        Some(Self { n, weights })
    }
}

/// Invariants of the scheme `X_1(n)`, `n >= 5`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CurveData {
    pub deg_omega: i64,
    pub cusps: i64,
    pub genus: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Geometry {
    Curve(CurveData),
    Stacky(StackyData),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CurveInvariants {
    pub n: u64,
    pub d_n: u64,
    pub geometry: Geometry,
}

impl CurveInvariants {
    /// `d_n / 24`, defined for every level.
    pub fn deg_omega(&self) -> Rational64 {
        Rational64::new(self.d_n as i64, 24)
    }

    /// `(1/2) sum phi(d) phi(n/d)`, defined for every level.
    pub fn cusps(&self) -> Rational64 {
        Rational64::new(dsum_g(self.n) as i64, 2)
    }

    pub fn valid_for_curve(&self) -> bool {
        matches!(self.geometry, Geometry::Curve(_))
    }

    pub fn curve(&self) -> Option<CurveData> {
        match self.geometry {
            Geometry::Curve(c) => Some(c),
            Geometry::Stacky(_) => None,
        }
    }

    pub fn stacky(&self) -> Option<StackyData> {
        match self.geometry {
            Geometry::Stacky(s) => Some(s),
            Geometry::Curve(_) => None,
        }
    }

    pub fn genus(&self) -> Option<i64> {
        self.curve().map(|c| c.genus)
    }
}

pub fn curve_invariants(n: u64) -> Result<CurveInvariants> {
    check_level(n)?;
    let d_n = dsum_f(n);
    let closed = degree_euler_product(n);
    if d_n != closed {
        return Err(Error::Internal(format!(
            "divisor sum {d_n} and Euler product {closed} disagree at n={n}"
        )));
    }
    if let Some(stacky) = StackyData::for_level(n) {
        return Ok(CurveInvariants { n, d_n, geometry: Geometry::Stacky(stacky) });
    }
    let deg = Rational64::new(d_n as i64, 24);
    let cusps = Rational64::new(dsum_g(n) as i64, 2);
    let genus = Rational64::from_integer(1) + deg - cusps / 2;
    if !deg.is_integer() || !cusps.is_integer() || !genus.is_integer() || genus < 0.into() {
        return Err(Error::Internal(format!(
            "non-integral curve invariants at n={n}: deg={deg} cusps={cusps} genus={genus}"
        )));
    }
    Ok(CurveInvariants {
        n,
        d_n,
        geometry: Geometry::Curve(CurveData {
            deg_omega: deg.to_integer(),
            cusps: cusps.to_integer(),
            genus: genus.to_integer(),
        }),
    })
}
