use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

/// An element `c + d sigma` of `RO(C_2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct RO2Degree {
    pub c: i64,
    pub d: i64,
}

impl RO2Degree {
    pub const fn new(c: i64, d: i64) -> Self {
        Self { c, d }
    }

    /// `a + b rho = (a + b) + b sigma`.
    pub const fn from_rho(a: i64, b: i64) -> Self {
        Self { c: a + b, d: b }
    }

    pub const fn rho() -> Self {
        Self { c: 1, d: 1 }
    }

    pub const fn underlying(self) -> i64 {
        self.c + self.d
    }

    /// `(a, b)` with `self = a + b rho`.
    pub const fn rho_form(self) -> (i64, i64) {
        (self.c - self.d, self.d)
    }

    pub fn sigma_string(self) -> String {
        join_terms(self.c, self.d, "sigma")
    }
}

fn join_terms(a: i64, b: i64, unit: &str) -> String {
    let tail = match b {
        0 => return a.to_string(),
        1 => unit.to_string(),
        -1 => format!("-{unit}"),
        b => format!("{b}{unit}"),
    };
    match (a, b > 0) {
        (0, _) => tail,
        (a, true) => format!("{a}+{tail}"),
        (a, false) => format!("{a}{tail}"),
    }
}

/// Prints `a + b rho`, e.g. `5-3rho`.
impl fmt::Display for RO2Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = self.rho_form();
        f.write_str(&join_terms(a, b, "rho"))
    }
}

impl Add for RO2Degree {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.c + o.c, self.d + o.d)
    }
}

impl Sub for RO2Degree {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.c - o.c, self.d - o.d)
    }
}

impl Neg for RO2Degree {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.c, -self.d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rho_arithmetic() {
        let x = RO2Degree::from_rho(5, -3);
        assert_eq!(x, RO2Degree::new(2, -3));
        assert_eq!(x.underlying(), -1);
        assert_eq!(x.to_string(), "5-3rho");
        assert_eq!(RO2Degree::from_rho(0, -6).to_string(), "-6rho");
        assert_eq!(RO2Degree::from_rho(5, 0).to_string(), "5");
        assert_eq!(RO2Degree::new(8, -8).sigma_string(), "8-8sigma");
        assert_eq!(RO2Degree::rho() + RO2Degree::rho(), RO2Degree::from_rho(0, 2));
    }
}
