//! Dense integer polynomials in one variable `t`.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use serde::Serialize;

/// `sum c_i t^i` with `i64` coefficients; trailing zeros are trimmed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize)]
#[serde(transparent)]
pub struct Poly(Vec<i64>);

impl Poly {
    pub fn new(mut coeffs: Vec<i64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn one() -> Self {
        Poly(vec![1])
    }

    pub fn monomial(c: i64, e: usize) -> Self {
        let mut v = vec![0; e + 1];
        v[e] = c;
        Poly::new(v)
    }

    /// `1 - t^e`.
    pub fn one_minus_t_pow(e: usize) -> Self {
        assert!(e > 0);
        &Poly::one() - &Poly::monomial(1, e)
    }

    /// `1 + t + ... + t^(e-1)`.
    pub fn geometric(e: usize) -> Self {
        Poly::new(vec![1; e])
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.0
    }

    pub fn coeff(&self, i: usize) -> i64 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn eval_at_one(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn scale(&self, c: i64) -> Self {
        Poly::new(self.0.iter().map(|a| a * c).collect())
    }

    /// Long division by a polynomial whose leading coefficient is `±1`.
    ///
    /// Returns `(quotient, remainder)` with `deg remainder < deg divisor`.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        let dd = divisor.degree().expect("division by zero polynomial");
        let lead = divisor.0[dd];
        assert!(lead == 1 || lead == -1, "divisor must be monic up to sign");
        let mut rem = self.0.clone();
        if rem.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![0; rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = rem[i] * lead;
            if c == 0 {
                continue;
            }
            quot[i - dd] = c;
            for (j, &b) in divisor.0.iter().enumerate() {
                rem[i - dd + j] -= c * b;
            }
        }
        (Poly::new(quot), Poly::new(rem))
    }

    /// Exact quotient, or `None` when the remainder is nonzero.
    pub fn div_exact(&self, divisor: &Poly) -> Option<Poly> {
        let (q, r) = self.div_rem(divisor);
        r.is_zero().then_some(q)
    }

    /// Power series coefficients of `self / prod (1 - t^e)` up to `t^order` inclusive.
    pub fn series_over(&self, denominator_exponents: &[u32], order: usize) -> Vec<i64> {
        let mut s = vec![0i64; order + 1];
        for (i, &c) in self.0.iter().enumerate().take(order + 1) {
            s[i] = c;
        }
        for &e in denominator_exponents {
            let e = e as usize;
            for i in e..=order {
                s[i] += s[i - e];
            }
        }
        s
    }

    /// `t^deg * P(1/t) == P(t)`.
    pub fn is_palindromic(&self) -> bool {
        self.0.iter().eq(self.0.iter().rev())
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.0.len().max(rhs.0.len());
        Poly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.0.len().max(rhs.0.len());
        Poly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![0; self.0.len() + rhs.0.len() - 1];
        for (i, &a) in self.0.iter().enumerate() {
            for (j, &b) in rhs.0.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        Poly::new(v)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.0.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else { "+" };
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match (i, a) {
                (0, _) => write!(f, "{a}")?,
                (_, 1) => {}
                _ => write!(f, "{a}")?,
            }
            match i {
                0 => {}
                1 => write!(f, "t")?,
                _ => write!(f, "t^{i}")?,
            }
        }
        Ok(())
    }
}
