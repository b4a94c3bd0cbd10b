//! Multiplicities of shifted summands in module splittings of `Tmf_1(n)`.
//!
//! `Tmf_1(n)_(l)` splits into shifted copies of `Tmf_1(3)` (`l = 2`), `Tmf_1(2)`
//! (`l = 3`) or `Tmf` (`l >= 5` or rationally). The multiset of shifts is read off
//! by dividing Hilbert series: `Q(t) = H_n(t) / H_base(t)`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::cohomology::{hilbert_series, S1Table};
use crate::duality::twist;
use crate::levels::{curve_invariants, euler_phi, is_prime};
use crate::poly::Poly;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Base {
    /// `Tmf_1(3)`, generators of weight 1 and 3.
    L2,
    /// `Tmf_1(2)`, generators of weight 2 and 4.
    L3,
    /// `Tmf`, generators of weight 4 and 6.
    Rational,
}

impl Base {
    pub fn exponents(self) -> (u32, u32) {
        match self {
            Base::L2 => (1, 3),
            Base::L3 => (2, 4),
            Base::Rational => (4, 6),
        }
    }

    /// `0` stands for the rational splitting.
    pub fn for_prime(l: u64) -> Result<Base> {
        match l {
            0 => Ok(Base::Rational),
            2 => Ok(Base::L2),
            3 => Ok(Base::L3),
            l if is_prime(l) => Ok(Base::Rational),
            l => Err(Error::NotPrime(l)),
        }
    }

    fn excluded_prime(self) -> Option<u64> {
        match self {
            Base::L2 => Some(2),
            Base::L3 => Some(3),
            Base::Rational => None,
        }
    }
}

/// `Q(t) = sum l_j t^j`: `l_j` copies of `Sigma^{2j}` of the base.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShiftPolynomial {
    pub n: u64,
    pub base: Base,
    pub q: Poly,
}

impl ShiftPolynomial {
    pub fn coeffs(&self) -> BTreeMap<usize, u64> {
        self.q
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(j, &c)| (j, c as u64))
            .collect()
    }

    pub fn total_rank(&self) -> u64 {
        self.q.eval_at_one() as u64
    }
}

pub fn shift_polynomial(n: u64, base: Base, table: &S1Table) -> Result<ShiftPolynomial> {
    let inv = curve_invariants(n)?;
    if let Some(l) = base.excluded_prime() {
        if n.is_multiple_of(l) {
            return Err(Error::Precondition(format!("level {n} is divisible by {l}, not tame at {l}")));
        }
    }
    let hs = hilbert_series(n, table)?;
    let (e1, e2) = base.exponents();
    let num = &(&hs.numerator * &Poly::one_minus_t_pow(e1 as usize)) * &Poly::one_minus_t_pow(e2 as usize);
    let (q, rem) = num.div_rem(&hs.denominator());
    if !rem.is_zero() {
        return Err(Error::NoSplitting { n, reason: format!("Hilbert series quotient leaves remainder {rem}") });
    }
    if let Some(c) = q.coeffs().iter().find(|&&c| c < 0) {
        return Err(Error::NoSplitting { n, reason: format!("negative multiplicity {c} in {q}") });
    }
    let expected = inv.d_n as i64 * (e1 * e2) as i64;
    if q.eval_at_one() * 24 != expected {
        return Err(Error::Internal(format!("rank check failed for n={n}: Q(1)={} but d_n e1 e2/24 = {expected}/24", q.eval_at_one())));
    }
    Ok(ShiftPolynomial { n, base, q })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum PalindromeVerdict {
    /// `l_{10+i-j} = l_j` for all `j`.
    Holds { twist: i64 },
    Violated { twist: i64 },
    /// No `i` with `Omega = omega^i`.
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RationalSplit {
    pub shifts: ShiftPolynomial,
    pub symmetry: PalindromeVerdict,
}

pub fn rational_multiplicities(n: u64, table: &S1Table) -> Result<RationalSplit> {
    let shifts = shift_polynomial(n, Base::Rational, table)?;
    let symmetry = match twist(n, table)? {
        None => PalindromeVerdict::NotApplicable,
        Some(i) => {
            let top = 10 + i;
            let q = &shifts.q;
            let ok = top >= 0
                && q.degree().is_none_or(|d| d as i64 <= top)
                && (0..=top).all(|j| q.coeff(j as usize) == q.coeff((top - j) as usize));
            if ok {
                PalindromeVerdict::Holds { twist: i }
            } else {
                PalindromeVerdict::Violated { twist: i }
            }
        }
    };
    Ok(RationalSplit { shifts, symmetry })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Torsion {
    Holds,
    Fails,
    Unknown,
}

/// Whether `pi_1 Tmf_1(n)` is `l`-torsionfree, as far as it is known.
#[derive(Debug, Clone, Default)]
pub struct TorsionKnowledge {
    overrides: BTreeMap<(u64, u64), Torsion>,
}

impl TorsionKnowledge {
    pub fn set(&mut self, n: u64, l: u64, t: Torsion) {
        self.overrides.insert((n, l), t);
    }

    pub fn condition(&self, n: u64, l: u64, table: &S1Table) -> Result<Torsion> {
        if !is_prime(l) {
            return Err(Error::NotPrime(l));
        }
        if n == 0 {
            return Err(Error::InvalidLevel(n));
        }
        if n.is_multiple_of(l) {
            return Err(Error::Precondition(format!("{l} divides the level {n}")));
        }
        if let Some(&t) = self.overrides.get(&(n, l)) {
            return Ok(t);
        }
        if n == 1 {
            // eta and alpha_1 are torsion in pi_*Tmf at 2 and 3.
            return Ok(if l <= 3 { Torsion::Fails } else { Torsion::Holds });
        }
        // A dualizing sheaf that is a power of omega forces torsionfree H^1.
        if let Ok(Some(_)) = twist(n, table) {
            return Ok(Torsion::Holds);
        }
        Ok(match (l, n) {
            (2, n) if n < 65 => Torsion::Holds,
            (2, 65) => Torsion::Fails,
            _ => Torsion::Unknown,
        })
    }
}

pub fn torsion_condition(n: u64, l: u64, table: &S1Table) -> Result<Torsion> {
    TorsionKnowledge::default().condition(n, l, table)
}

/// `Sigma^{2k}` summands of a `Tmf_1(3)` splitting lift to `Sigma^{k rho}`: pairs `(k, l_k)`.
pub fn rho_decorate(q: &ShiftPolynomial) -> Result<Vec<(usize, u64)>> {
    if q.base != Base::L2 {
        return Err(Error::Precondition("rho shifts exist only for 2-local splittings over Tmf_1(3)".into()));
    }
    Ok(q.coeffs().into_iter().collect())
}

/// Sums of `l_j` over the residue classes of `j` mod `m`, and whether they all agree.
pub fn profile_mod(q: &ShiftPolynomial, m: usize) -> Result<(Vec<u64>, bool)> {
    if m == 0 {
        return Err(Error::Precondition("modulus must be positive".into()));
    }
    let mut sums = vec![0u64; m];
    for (j, c) in q.coeffs() {
        sums[j % m] += c;
    }
    let equal = sums.iter().all(|&s| s == sums[0]);
    Ok((sums, equal))
}

/// Fixed points `Tmf_0(n) = Tmf_1(n)^{hC}` descend the `C_2` splitting when `4` does not divide `phi(n)`.
pub fn c2_descent_applicable(n: u64) -> Result<bool> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(Error::Precondition(format!("level must be odd and at least 3, got {n}")));
    }
    Ok(!euler_phi(n).is_multiple_of(4))
}
