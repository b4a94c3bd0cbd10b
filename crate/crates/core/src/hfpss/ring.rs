//! Graded monomial rings `pi_{2*}R` with a chosen `v`-sequence.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CoefficientBase {
    #[serde(rename = "Z")]
    Integers,
    #[serde(rename = "Z2loc")]
    TwoLocal,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub sym: String,
    /// `wt = w` puts the generator in underlying degree `2w`, equivariant degree `w rho`.
    pub weight: i64,
    pub invertible: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    /// `v_h` is a unit.
    Invertible,
    /// `v_{h+1}` lies in `(2, v_1, ..., v_h)`.
    InIdeal,
}

/// Exponent vector over the generators of a [`RingSpec`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub Vec<i64>);

impl Monomial {
    pub fn one(len: usize) -> Self {
        Monomial(vec![0; len])
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn div(&self, o: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingSpecFile {
    pub name: String,
    pub base: CoefficientBase,
    pub generators: Vec<Generator>,
    pub v: Vec<String>,
    #[serde(default)]
    pub termination: Option<Termination>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingSpec {
    pub name: String,
    pub base: CoefficientBase,
    pub generators: Vec<Generator>,
    /// `v_1, ..., v_h`; `None` is the zero element.
    pub v: Vec<Option<Monomial>>,
    pub termination: Termination,
    source: RingSpecFile,
}

pub const PRESET_NAMES: [&str; 3] = ["height1-laurent", "height2-poly", "height2-laurent"];

fn gen(sym: &str, weight: i64, invertible: bool) -> Generator {
    Generator { sym: sym.into(), weight, invertible }
}

fn valid_symbol(s: &str) -> bool {
    let mut ch = s.chars();
    ch.next().is_some_and(|c| c.is_ascii_alphabetic()) && ch.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl RingSpec {
    pub fn preset(name: &str) -> Result<RingSpec> {
        let (generators, v, termination) = match name {
            "height1-laurent" => (vec![gen("beta", 1, true)], vec!["beta"], Termination::Invertible),
            "height2-poly" => (vec![gen("a1", 1, false), gen("a3", 3, false)], vec!["a1", "a3"], Termination::InIdeal),
            "height2-laurent" => (vec![gen("a1", 1, false), gen("a3", 3, true)], vec!["a1", "a3"], Termination::Invertible),
            other => return Err(Error::InvalidRing(format!("unknown preset `{other}`"))),
        };
        RingSpec::from_file(RingSpecFile {
            name: name.into(),
            base: CoefficientBase::TwoLocal,
            generators,
            v: v.into_iter().map(String::from).collect(),
            termination: Some(termination),
        })
    }

    pub fn presets() -> Vec<RingSpec> {
        PRESET_NAMES.iter().map(|n| RingSpec::preset(n).expect("presets are valid")).collect()
    }

    pub fn from_json(text: &str) -> Result<RingSpec> {
        let file: RingSpecFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        RingSpec::from_file(file)
    }

    pub fn to_file(&self) -> &RingSpecFile {
        &self.source
    }

    pub fn from_file(file: RingSpecFile) -> Result<RingSpec> {
        let bad = |m: String| Err(Error::InvalidRing(m));
        if file.generators.is_empty() {
            return bad("no generators".into());
        }
        for (i, g) in file.generators.iter().enumerate() {
            if !valid_symbol(&g.sym) {
                return bad(format!("invalid generator symbol `{}`", g.sym));
            }
            if g.weight < 1 {
                return bad(format!("generator `{}` has weight {} < 1", g.sym, g.weight));
            }
            if file.generators[..i].iter().any(|h| h.sym == g.sym) {
                return bad(format!("duplicate generator `{}`", g.sym));
            }
        }
        let Some(termination) = file.termination else {
            return Err(Error::NonTerminating(format!(
                "ring `{}` declares no termination: need v_h invertible or v_(h+1) in the ideal",
                file.name
            )));
        };
        if file.v.is_empty() {
            return bad("empty v-sequence".into());
        }
        let mut spec = RingSpec {
            name: file.name.clone(),
            base: file.base,
            generators: file.generators.clone(),
            v: Vec::new(),
            termination,
            source: file.clone(),
        };
        let h = file.v.len();
        for (idx, text) in file.v.iter().enumerate() {
            let i = idx + 1;
            let parsed = if text.trim() == "0" { None } else { Some(spec.parse_monomial(text)?) };
            if let Some(m) = &parsed {
                let want = (1i64 << i) - 1;
                if spec.weight(m) != want {
                    return bad(format!("v_{i} = `{text}` has weight {}, expected {want}", spec.weight(m)));
                }
            }
            if i < h {
                let Some(g) = parsed.as_ref().and_then(|m| spec.as_generator(m)) else {
                    return bad(format!("v_{i} = `{text}` must be a single generator"));
                };
                if spec.generators[g].invertible {
                    return bad(format!("v_{i} = `{text}` is invertible but is not the last v"));
                }
                if spec.v.iter().flatten().any(|m| spec.as_generator(m) == Some(g)) {
                    return bad(format!("v_{i} = `{text}` repeats an earlier v"));
                }
            }
            spec.v.push(parsed);
        }
        if termination == Termination::Invertible {
            let last = spec.v[h - 1].as_ref().and_then(|m| spec.as_generator(m));
            if !last.is_some_and(|g| spec.generators[g].invertible) {
                return bad(format!("termination `invertible` needs v_{h} to be an invertible generator"));
            }
        }
        Ok(spec)
    }

    pub fn height(&self) -> usize {
        self.v.len()
    }

    fn as_generator(&self, m: &Monomial) -> Option<usize> {
        let nz: Vec<usize> = (0..m.0.len()).filter(|&k| m.0[k] != 0).collect();
        match nz[..] {
            [k] if m.0[k] == 1 => Some(k),
            _ => None,
        }
    }

    fn symbol_index(&self, s: &str) -> Result<usize> {
        self.generators
            .iter()
            .position(|g| g.sym == s)
            .ok_or_else(|| Error::InvalidRing(format!("unknown symbol `{s}` in ring `{}`", self.name)))
    }

    /// Parses `1`, `a1`, `a1^3*a3^-1` or `a1 a3`.
    pub fn parse_monomial(&self, text: &str) -> Result<Monomial> {
        let mut m = Monomial::one(self.generators.len());
        let text = text.trim();
        if text == "1" {
            return Ok(m);
        }
        for factor in text.split(|c: char| c == '*' || c.is_whitespace()).filter(|f| !f.is_empty()) {
            let (sym, exp) = match factor.split_once('^') {
                Some((s, e)) => (s, e.parse::<i64>().map_err(|_| Error::Parse(format!("bad exponent in `{factor}`")))?),
                None => (factor, 1),
            };
            let k = self.symbol_index(sym)?;
            m.0[k] += exp;
        }
        for (k, g) in self.generators.iter().enumerate() {
            if m.0[k] < 0 && !g.invertible {
                return Err(Error::InvalidRing(format!("negative power of non-invertible `{}` in `{text}`", g.sym)));
            }
        }
        Ok(m)
    }

    /// Parses an integer combination such as `a1^4 - 24 a1 a3`.
    pub fn parse_polynomial(&self, text: &str) -> Result<Vec<(i64, Monomial)>> {
        let mut terms = Vec::new();
        let mut cur = String::new();
        let mut sign = 1i64;
        let mut prev = ' ';
        let flush = |cur: &mut String, sign: i64, terms: &mut Vec<(i64, Monomial)>| -> Result<()> {
            let t = cur.trim();
            if t.is_empty() {
                cur.clear();
                return Ok(());
            }
            let mut coeff = sign;
            let mut rest: Vec<&str> = Vec::new();
            for f in t.split(|c: char| c == '*' || c.is_whitespace()).filter(|f| !f.is_empty()) {
                match f.parse::<i64>() {
                    Ok(c) => coeff *= c,
                    Err(_) => rest.push(f),
                }
            }
            let mono = if rest.is_empty() { Monomial::one(self.generators.len()) } else { self.parse_monomial(&rest.join("*"))? };
            terms.push((coeff, mono));
            cur.clear();
            Ok(())
        };
        for ch in text.chars() {
            if (ch == '+' || ch == '-') && prev != '^' {
                flush(&mut cur, sign, &mut terms)?;
                sign = if ch == '-' { -1 } else { 1 };
            } else {
                cur.push(ch);
            }
            if !ch.is_whitespace() {
                prev = ch;
            }
        }
        flush(&mut cur, sign, &mut terms)?;
        if terms.is_empty() {
            return Err(Error::Parse(format!("empty polynomial `{text}`")));
        }
        Ok(terms)
    }

    pub fn weight(&self, m: &Monomial) -> i64 {
        m.0.iter().zip(&self.generators).map(|(e, g)| e * g.weight).sum()
    }

    pub fn format(&self, m: &Monomial) -> String {
        let mut s = String::new();
        for (e, g) in m.0.iter().zip(&self.generators) {
            if *e == 0 {
                continue;
            }
            if !s.is_empty() {
                s.push('*');
            }
            s.push_str(&g.sym);
            if *e != 1 {
                let _ = write!(s, "^{e}");
            }
        }
        if s.is_empty() {
            s.push('1');
        }
        s
    }

    /// `a | b`: the quotient has no negative power of a non-invertible generator.
    pub fn divides(&self, a: &Monomial, b: &Monomial) -> bool {
        a.0.iter().zip(&b.0).zip(&self.generators).all(|((x, y), g)| g.invertible || y >= x)
    }

    /// Whether `p` lies in `(2, v_1, ..., v_e)`.
    pub fn in_ideal(&self, p: &Monomial, e: usize) -> bool {
        self.v.iter().take(e).flatten().any(|v| self.divides(v, p))
    }

    /// Smallest `j` with `v_j` in `(2, v_1, ..., v_{j-1})`.
    pub fn degenerate_index(&self) -> Option<usize> {
        (1..=self.height()).find(|&j| match &self.v[j - 1] {
            None => true,
            Some(m) => self.in_ideal(m, j - 1),
        })
    }

    /// `v_j` if the differential `d_{2^{j+1}-1}` it controls can be nonzero.
    pub fn effective_v(&self, j: usize) -> Option<&Monomial> {
        if j == 0 || j > self.height() || self.degenerate_index().is_some_and(|k| j >= k) {
            return None;
        }
        self.v[j - 1].as_ref()
    }

    /// Number of `v_j` that drive nonzero differentials.
    pub fn effective_height(&self) -> usize {
        (1..=self.height()).take_while(|&j| self.effective_v(j).is_some()).count()
    }

    /// `E_{collapse_page} = E_infinity`.
    pub fn collapse_page(&self) -> u32 {
        match self.effective_height() {
            0 => 2,
            j => 1 << (j + 1),
        }
    }

    /// Highest filtration that can be occupied on `E_infinity`.
    pub fn vanishing_line(&self) -> Option<u32> {
        match self.termination {
            Termination::Invertible => Some((1u32 << (self.height() + 1)) - 2),
            Termination::InIdeal => None,
        }
    }

    /// All monomials of weight `w` whose invertible exponents have absolute value at most `bound`.
    pub fn monomials_of_weight(&self, w: i64, bound: i64) -> Vec<Monomial> {
        let n = self.generators.len();
        let mut inv_after = vec![0i64; n + 1];
        for k in (0..n).rev() {
            let g = &self.generators[k];
            inv_after[k] = inv_after[k + 1] + if g.invertible { g.weight } else { 0 };
        }
        let mut out = Vec::new();
        let mut cur = vec![0i64; n];
        self.enumerate(0, w, bound, &inv_after, &mut cur, &mut out);
        out.sort();
        out
    }

    fn enumerate(&self, k: usize, rem: i64, bound: i64, inv_after: &[i64], cur: &mut Vec<i64>, out: &mut Vec<Monomial>) {
        if k == self.generators.len() {
            if rem == 0 {
                out.push(Monomial(cur.clone()));
            }
            return;
        }
        let g = &self.generators[k];
        let slack = rem + bound * inv_after[k + 1];
        let range: Vec<i64> = if g.invertible {
            (-bound..=bound).collect()
        } else if slack < 0 {
            Vec::new()
        } else {
            (0..=slack / g.weight).collect()
        };
        for e in range {
            cur[k] = e;
            self.enumerate(k + 1, rem - e * g.weight, bound, inv_after, cur, out);
        }
        cur[k] = 0;
    }

    /// Largest invertible exponent appearing in any effective `v`.
    pub(crate) fn v_exponent_span(&self, j: usize) -> i64 {
        self.effective_v(j).map_or(0, |m| {
            m.0.iter().zip(&self.generators).filter(|(_, g)| g.invertible).map(|(e, _)| e.abs()).max().unwrap_or(0)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_load() {
        let p = RingSpec::presets();
        assert_eq!(p.len(), 3);
        assert_eq!(p[0].height(), 1);
        assert_eq!(p[1].termination, Termination::InIdeal);
        assert_eq!(p.iter().map(|s| s.collapse_page()).collect::<Vec<_>>(), vec![4, 8, 8]);
        assert_eq!(p[0].vanishing_line(), Some(2));
        assert_eq!(p[2].vanishing_line(), Some(6));
    }

    #[test]
    fn weight_zero_basis_matches_brute_force() {
        let r = RingSpec::preset("height2-laurent").unwrap();
        let got = r.monomials_of_weight(0, 5);
        let mut brute = Vec::new();
        for i in 0..=100 {
            for j in -5..=5i64 {
                if i + 3 * j == 0 {
                    brute.push(Monomial(vec![i, j]));
                }
            }
        }
        brute.sort();
        assert_eq!(got, brute);
        assert_eq!(got.len(), 6);
        assert_eq!(RingSpec::preset("height1-laurent").unwrap().monomials_of_weight(-3, 3).len(), 1);
        assert_eq!(RingSpec::preset("height2-poly").unwrap().monomials_of_weight(6, 0).len(), 3);
    }

    #[test]
    fn parsing() {
        let r = RingSpec::preset("height2-laurent").unwrap();
        let m = r.parse_monomial("a1^3*a3^-1").unwrap();
        assert_eq!(m, Monomial(vec![3, -1]));
        assert_eq!(r.format(&m), "a1^3*a3^-1");
        assert_eq!(r.weight(&m), 0);
        assert!(r.parse_monomial("a1^-1").is_err());
        assert!(r.parse_monomial("b").is_err());
        let p = r.parse_polynomial("a1^4 - 24 a1 a3").unwrap();
        assert_eq!(p, vec![(1, Monomial(vec![4, 0])), (-24, Monomial(vec![1, 1]))]);
        let p = r.parse_polynomial("-a3^-2 + 3").unwrap();
        assert_eq!(p, vec![(-1, Monomial(vec![0, -2])), (3, Monomial(vec![0, 0]))]);
    }

    #[test]
    fn validation() {
        let base = |v: Vec<&str>, term: Option<Termination>| RingSpecFile {
            name: "t".into(),
            base: CoefficientBase::TwoLocal,
            generators: vec![gen("a1", 1, false), gen("a3", 3, false)],
            v: v.into_iter().map(String::from).collect(),
            termination: term,
        };
        assert!(matches!(RingSpec::from_file(base(vec!["a1"], None)), Err(Error::NonTerminating(_))));
        assert!(RingSpec::from_file(base(vec!["a3"], Some(Termination::InIdeal))).is_err());
        assert!(RingSpec::from_file(base(vec!["a1", "a3"], Some(Termination::Invertible))).is_err());
        let deg = RingSpec::from_file(base(vec!["a1", "a1^3"], Some(Termination::InIdeal))).unwrap();
        assert_eq!(deg.degenerate_index(), Some(2));
        assert_eq!(deg.effective_height(), 1);
        assert_eq!(deg.collapse_page(), 4);
        let json = r#"{"name":"x","base":"Z","generators":[{"sym":"b","weight":1,"invertible":true}],"v":["b"],"termination":"invertible"}"#;
        assert_eq!(RingSpec::from_json(json).unwrap().height(), 1);
        let missing = r#"{"name":"x","base":"Z","generators":[{"sym":"b","weight":1,"invertible":true}],"v":["b"]}"#;
        assert!(matches!(RingSpec::from_json(missing), Err(Error::NonTerminating(_))));
    }

    #[test]
    fn ideals() {
        let r = RingSpec::preset("height2-laurent").unwrap();
        let a1a3 = Monomial(vec![1, -4]);
        assert!(!r.in_ideal(&a1a3, 0));
        assert!(r.in_ideal(&a1a3, 1));
        assert!(r.in_ideal(&Monomial(vec![0, -7]), 2));
        assert!(!r.in_ideal(&Monomial(vec![0, -7]), 1));
    }
}
