//! Ranks of `H^0` and `H^1` of `omega^k` on the compactified moduli of `Gamma_1(n)`
//! and the Hilbert series of the graded ring of modular forms.

use std::collections::BTreeMap;
use std::io::Read;
use std::ops::RangeInclusive;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::levels::{curve_invariants, Geometry};
use crate::poly::Poly;
use crate::{Error, Result};

/// Environment variable naming a default `n,s1` CSV file.
pub const S1_FILE_ENV: &str = "TMF_LEVEL_S1_FILE";

/// Dimension of weight-1 cusp forms for `Gamma_1(n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum S1Value {
    Known(u32),
    /// Known to differ from 1, exact value not recorded.
    NotOne,
    Unknown,
}

impl S1Value {
    pub fn known(self) -> Option<u32> {
        match self {
            S1Value::Known(v) => Some(v),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Builtin,
    User,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct S1Table {
    entries: BTreeMap<u64, (S1Value, Provenance)>,
}

#[derive(Deserialize)]
struct S1Record {
    n: u64,
    s1: u32,
}

impl Default for S1Table {
    fn default() -> Self {
        Self::builtin()
    }
}

impl S1Table {
    pub fn empty() -> Self {
        Self { entries: BTreeMap::new() }
    }

    /// `s1 = 0` for `n <= 22`, `s1(23) = 1`, and `s1 != 1` for the other levels
    /// where `2g - 2 = deg omega` holds below 145.
    pub fn builtin() -> Self {
        let mut entries = BTreeMap::new();
        for n in 1..=22 {
            entries.insert(n, (S1Value::Known(0), Provenance::Builtin));
        }
        entries.insert(23, (S1Value::Known(1), Provenance::Builtin));
        for n in [32, 33, 35, 40, 42] {
            entries.insert(n, (S1Value::NotOne, Provenance::Builtin));
        }
        Self { entries }
    }

    pub fn get(&self, n: u64) -> S1Value {
        self.entries.get(&n).map_or(S1Value::Unknown, |e| e.0)
    }

    pub fn provenance(&self, n: u64) -> Option<Provenance> {
        self.entries.get(&n).map(|e| e.1)
    }

    /// Inserts a user value; returns a warning when it replaces different data.
    pub fn insert_user(&mut self, n: u64, s1: u32) -> Option<String> {
        let new = S1Value::Known(s1);
        let old = self.entries.insert(n, (new, Provenance::User));
        match old {
            Some((v, _)) if v != new => Some(format!(
                "s1({n}) = {s1} from user data overrides {}",
                match v {
                    S1Value::Known(x) => x.to_string(),
                    S1Value::NotOne => "a value other than 1".into(),
                    S1Value::Unknown => "unknown".into(),
                }
            )),
            _ => None,
        }
    }

    /// Reads `n,s1` records, overriding existing entries; returns the warnings.
    pub fn merge_csv<R: Read>(&mut self, reader: R) -> Result<Vec<String>> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .quoting(false)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let headers = rdr.headers().map_err(|e| Error::Parse(e.to_string()))?.clone();
        if headers.iter().collect::<Vec<_>>() != ["n", "s1"] {
            return Err(Error::Parse(format!("expected header `n,s1`, got `{}`", headers.iter().collect::<Vec<_>>().join(","))));
        }
        let mut warnings = Vec::new();
        for rec in rdr.deserialize::<S1Record>() {
            let rec = rec.map_err(|e| Error::Parse(e.to_string()))?;
            if rec.n == 0 {
                return Err(Error::InvalidLevel(0));
            }
            warnings.extend(self.insert_user(rec.n, rec.s1));
        }
        Ok(warnings)
    }

    pub fn merge_file(&mut self, path: &Path) -> Result<Vec<String>> {
        let f = std::fs::File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        self.merge_csv(f)
    }

    /// Builtin table overridden by `path`, or by the file named in [`S1_FILE_ENV`].
    pub fn load(path: Option<&Path>) -> Result<(Self, Vec<String>)> {
        let mut table = Self::builtin();
        let env = std::env::var_os(S1_FILE_ENV);
        let chosen = path.map(Path::to_path_buf).or_else(|| env.map(Into::into));
        let warnings = match chosen {
            Some(p) => table.merge_file(&p)?,
            None => Vec::new(),
        };
        Ok((table, warnings))
    }
}

pub fn s1(n: u64, table: &S1Table) -> S1Value {
    table.get(n)
}

/// A rank that is either exact or waits on `s1` data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Rank {
    Exact { rank: u64 },
    /// The `s1`-independent part of the rank; the true rank is `lower_bound + s1`.
    NeedsS1 { lower_bound: u64 },
}

impl Rank {
    pub fn exact(self) -> Option<u64> {
        match self {
            Rank::Exact { rank } => Some(rank),
            Rank::NeedsS1 { .. } => None,
        }
    }

    pub fn value_or_bound(self) -> u64 {
        match self {
            Rank::Exact { rank } => rank,
            Rank::NeedsS1 { lower_bound } => lower_bound,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankTable {
    pub n: u64,
    pub window: (i64, i64),
    pub h0: BTreeMap<i64, Rank>,
    pub h1: BTreeMap<i64, Rank>,
}

impl RankTable {
    pub fn h0(&self, k: i64) -> Option<Rank> {
        self.h0.get(&k).copied()
    }

    pub fn h1(&self, k: i64) -> Option<Rank> {
        self.h1.get(&k).copied()
    }
}

/// Number of `(i, j) >= 0` with `a i + b j = k`.
pub fn weighted_count(a: u32, b: u32, k: i64) -> u64 {
    if k < 0 {
        return 0;
    }
    let (a, b) = (a as i64, b as i64);
    (0..=k / a).filter(|i| (k - a * i) % b == 0).count() as u64
}

/// Rank data for level `n` that is independent of the window.
#[derive(Debug, Clone, Copy)]
enum Model {
    Curve { deg: i64, genus: i64, half_cusps: i64, s1: S1Value },
    Stacky { a: u32, b: u32 },
}

fn model(n: u64, table: &S1Table) -> Result<Model> {
    let inv = curve_invariants(n)?;
    Ok(match inv.geometry {
        Geometry::Stacky(s) => Model::Stacky { a: s.weights.0, b: s.weights.1 },
        Geometry::Curve(c) => {
            if c.cusps % 2 != 0 {
                return Err(Error::Internal(format!("odd cusp count {} at n={n}", c.cusps)));
            }
            Model::Curve { deg: c.deg_omega, genus: c.genus, half_cusps: c.cusps / 2, s1: table.get(n) }
        }
    })
}

impl Model {
    fn h0(self, k: i64) -> Rank {
        match self {
            Model::Stacky { a, b } => Rank::Exact { rank: weighted_count(a, b, k) },
            Model::Curve { deg, genus, half_cusps, s1 } => match k {
                k if k < 0 => Rank::Exact { rank: 0 },
                0 => Rank::Exact { rank: 1 },
                1 => match s1.known() {
                    Some(s) => Rank::Exact { rank: (half_cusps + s as i64) as u64 },
                    None => Rank::NeedsS1 { lower_bound: half_cusps as u64 },
                },
                k => Rank::Exact { rank: (k * deg + 1 - genus) as u64 },
            },
        }
    }

    fn h1(self, k: i64) -> Rank {
        match self {
            Model::Stacky { a, b } => Rank::Exact { rank: weighted_count(a, b, -(a as i64) - (b as i64) - k) },
            Model::Curve { deg, genus, s1, .. } => match k {
                k if k < 0 => Rank::Exact { rank: (genus - 1 - k * deg).max(0) as u64 },
                0 => Rank::Exact { rank: genus as u64 },
                1 => match s1.known() {
                    Some(s) => Rank::Exact { rank: s as u64 },
                    None => Rank::NeedsS1 { lower_bound: 0 },
                },
                _ => Rank::Exact { rank: 0 },
            },
        }
    }
}

pub fn rank_table(n: u64, window: RangeInclusive<i64>, table: &S1Table) -> Result<RankTable> {
    let m = model(n, table)?;
    let (lo, hi) = (*window.start(), *window.end());
    let h0 = window.clone().map(|k| (k, m.h0(k))).collect();
    let h1 = window.map(|k| (k, m.h1(k))).collect();
    Ok(RankTable { n, window: (lo, hi), h0, h1 })
}

/// `numerator / prod (1 - t^e)` for `e` in `denominator_exponents`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HilbertSeries {
    pub numerator: Poly,
    pub denominator_exponents: Vec<u32>,
}

impl HilbertSeries {
    /// Coefficients of `t^0 .. t^order`.
    pub fn expand(&self, order: usize) -> Vec<i64> {
        self.numerator.series_over(&self.denominator_exponents, order)
    }

    pub fn denominator(&self) -> Poly {
        self.denominator_exponents
            .iter()
            .fold(Poly::one(), |acc, &e| &acc * &Poly::one_minus_t_pow(e as usize))
    }
}

pub fn hilbert_series(n: u64, table: &S1Table) -> Result<HilbertSeries> {
    match model(n, table)? {
        Model::Stacky { a, b } => Ok(HilbertSeries { numerator: Poly::one(), denominator_exponents: vec![a, b] }),
        m @ Model::Curve { .. } => {
            let h = |k: i64| -> Result<i64> {
                m.h0(k).exact().map(|r| r as i64).ok_or(Error::NeedsS1 { n })
            };
            let second = |k: i64| -> Result<i64> { Ok(h(k)? - 2 * h(k - 1)? + h(k - 2)?) };
            if second(4)? != 0 {
                return Err(Error::Internal(format!("second difference of h0 nonzero at k=4 for n={n}")));
            }
            let coeffs = (0..=3).map(second).collect::<Result<Vec<_>>>()?;
            Ok(HilbertSeries { numerator: Poly::new(coeffs), denominator_exponents: vec![1, 1] })
        }
    }
}
