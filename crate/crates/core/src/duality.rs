//! Anderson self-duality of `Tmf_1(n)`.
//!
//! `Tmf_1(n)` is Anderson self-dual exactly when the dualizing sheaf of the compactified
//! moduli stack is a power `omega^i`; the shift is then `l = 1 - 2i`.

use num_rational::Rational64;
use rayon::prelude::*;
use serde::Serialize;

use crate::cohomology::{S1Table, S1Value};
use crate::hfpss::degree::RO2Degree;
use crate::levels::{curve_invariants, dsum_f, dsum_g, is_prime, Geometry};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Reason {
    /// `n <= 4`, a weighted projective line.
    StackyBuiltin,
    Genus0Degree,
    Genus1,
    DegreeEqualityPlusS1,
    None,
}

fn twist_with_reason(n: u64, table: &S1Table) -> Result<(Option<i64>, Reason)> {
    let inv = curve_invariants(n)?;
    let c = match inv.geometry {
        Geometry::Stacky(_) => {
            let i = [-10, -6, -4, -3][(n - 1) as usize];
            return Ok((Some(i), Reason::StackyBuiltin));
        }
        Geometry::Curve(c) => c,
    };
    Ok(match c.genus {
        0 if (-2) % c.deg_omega == 0 => (Some(-2 / c.deg_omega), Reason::Genus0Degree),
        0 => (None, Reason::None),
        1 => (Some(0), Reason::Genus1),
        g if 2 * g - 2 == c.deg_omega => match table.get(n) {
            S1Value::Known(1) => (Some(1), Reason::DegreeEqualityPlusS1),
            S1Value::Known(_) | S1Value::NotOne => (None, Reason::None),
            S1Value::Unknown => return Err(Error::NeedsS1 { n }),
        },
        _ => (None, Reason::None),
    })
}

/// The integer `i` with `Omega^1 = omega^i`, if it exists.
pub fn twist(n: u64, table: &S1Table) -> Result<Option<i64>> {
    twist_with_reason(n, table).map(|t| t.0)
}

/// All `n <= limit` with `f(n) = 12 g(n)`, i.e. `deg omega = 2g - 2`.
pub fn degreecomp_solutions(limit: u64) -> Vec<u64> {
    (1..=limit).filter(|&n| dsum_f(n) == 12 * dsum_g(n)).collect()
}

/// First `n` in the range violating `f(n) > 12 g(n)`.
pub fn degree_bound_violation(range: std::ops::RangeInclusive<u64>) -> Option<u64> {
    range.into_par_iter().filter(|&n| dsum_f(n) <= 12 * dsum_g(n)).min()
}

/// `g(p^k) / f(p^k)`.
pub fn ratio_table(p: u64, k: u32) -> Result<Rational64> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if k == 0 {
        return Err(Error::Precondition("exponent k must be at least 1".into()));
    }
    let q = p
        .checked_pow(k)
        .filter(|&q| q <= crate::levels::MAX_LEVEL)
        .ok_or_else(|| Error::Precondition(format!("{p}^{k} exceeds the supported level range")))?;
    Ok(Rational64::new(dsum_g(q) as i64, dsum_f(q) as i64))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DualityVerdict {
    pub n: u64,
    pub twist: Option<i64>,
    pub self_dual: bool,
    pub shift_l: Option<i64>,
    /// `Sigma^{c + d sigma}`, present for odd self-dual `n >= 3`.
    pub c2_shift: Option<RO2Degree>,
    pub reason: Reason,
}

pub fn verdict(n: u64, table: &S1Table) -> Result<DualityVerdict> {
    let (twist, reason) = twist_with_reason(n, table)?;
    let shift_l = twist.map(|i| 1 - 2 * i);
    let c2_shift = match shift_l {
        Some(l) if n >= 3 && n % 2 == 1 => {
            let m = (5 - l) / 2;
            Some(RO2Degree::new(5 - m, -m))
        }
        _ => None,
    };
    Ok(DualityVerdict { n, twist, self_dual: twist.is_some(), shift_l, c2_shift, reason })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DualityScan {
    pub max: u64,
    /// Self-dual levels in increasing order.
    pub rows: Vec<DualityVerdict>,
    /// Levels whose verdict depends on missing `s1` data.
    pub unknown: Vec<u64>,
}

pub fn scan(max: u64, table: &S1Table) -> Result<DualityScan> {
    let results: Vec<(u64, Result<DualityVerdict>)> =
        (1..=max).into_par_iter().map(|n| (n, verdict(n, table))).collect();
    let mut rows = Vec::new();
    let mut unknown = Vec::new();
    for (n, r) in results {
        match r {
            Ok(v) if v.self_dual => rows.push(v),
            Ok(_) => {}
            Err(Error::NeedsS1 { .. }) => unknown.push(n),
            Err(e) => return Err(e),
        }
    }
    Ok(DualityScan { max, rows, unknown })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct HomDualShift {
    pub compactified: RO2Degree,
    pub periodic: RO2Degree,
}

/// Shifts of the Spanier-Whitehead dual of `Tmf_1(3)` over `Tmf`.
///
/// The compactified shift is `-21 + (5 + 2rho)`; adding the period `16 - 8rho` of `u^4`
/// gives the periodic one.
pub fn hom_dual_shift() -> HomDualShift {
    let compactified = RO2Degree::new(-21, 0) + RO2Degree::from_rho(5, 2);
    let periodic = compactified + RO2Degree::from_rho(16, -8);
    HomDualShift { compactified, periodic }
}
