//! Regular `RO(C_2)`-graded homotopy fixed point spectral sequences.
//!
//! The `E_2` page is `pi_{2*}R ⊗ Z[a, u^{±1}]/2a` with `|a| = -sigma` in filtration 1 and
//! `|u| = 2 - 2sigma`. A class `a^s u^m w` with `w` of weight `wt` sits in degree
//! `(wt + 2m) + (wt - 2m - s) sigma`. The only differentials are
//! `d_{2^{e+2}-1}(u^{2^e}) = a^{2^{e+2}-1} v_{e+1}`, extended `a`- and `pi_{2*}R`-linearly.
//!
//! [`compute_einfty`] evaluates `E_infinity` on a finite window, either by running the
//! pages with explicit `F_2` linear algebra or from the closed form for survivors.

pub mod degree;
mod f2;
mod page;
pub mod predicates;
pub mod ring;

use serde::Serialize;

pub use degree::RO2Degree;
pub use predicates::{is_periodic, is_strongly_even, transfer_check, v_chain_check, VChainReport};
pub use ring::{Monomial, RingSpec, Termination};

use crate::{Error, Result};

/// `a^s u^m w`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PageClass {
    pub w_bar: Monomial,
    pub s: u32,
    pub m: i64,
}

impl PageClass {
    pub fn degree(&self, spec: &RingSpec) -> RO2Degree {
        let w = spec.weight(&self.w_bar);
        RO2Degree::new(w + 2 * self.m, w - 2 * self.m - self.s as i64)
    }

    pub fn display(&self, spec: &RingSpec) -> String {
        let mut parts = Vec::new();
        if self.s > 0 {
            parts.push(if self.s == 1 { "a".to_string() } else { format!("a^{}", self.s) });
        }
        if self.m != 0 {
            parts.push(if self.m == 1 { "u".to_string() } else { format!("u^{}", self.m) });
        }
        let w = spec.format(&self.w_bar);
        if w != "1" || parts.is_empty() {
            parts.push(w);
        }
        parts.join("*")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Group {
    /// A copy of `Z` generated by a monomial class.
    #[serde(rename = "Z")]
    Z,
    /// A copy of `Z` on which only twice a monomial survives.
    #[serde(rename = "Z_div2")]
    ZDiv2,
    #[serde(rename = "Z/2")]
    Z2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct EinftyEntry {
    pub filtration: u32,
    pub group: Group,
    pub multiplicity: u64,
}

/// A rectangle of degrees `c + d sigma` and filtrations `0..=max_filtration`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Window {
    pub c: (i64, i64),
    pub d: (i64, i64),
    pub max_filtration: u32,
    /// Bound on absolute exponents of invertible generators; defaults to the largest
    /// weight occurring in the window.
    pub exp_bound: Option<i64>,
}

/// Upper limit on the number of cells of a padded window.
pub const MAX_CELLS: usize = 4_000_000;

impl Window {
    pub fn square(r: i64, max_filtration: u32) -> Self {
        Self { c: (-r, r), d: (-r, r), max_filtration, exp_bound: None }
    }

    pub fn contains(&self, x: RO2Degree) -> bool {
        (self.c.0..=self.c.1).contains(&x.c) && (self.d.0..=self.d.1).contains(&x.d)
    }

    pub fn degrees(&self) -> impl Iterator<Item = RO2Degree> + '_ {
        (self.c.0..=self.c.1).flat_map(move |c| (self.d.0..=self.d.1).map(move |d| RO2Degree::new(c, d)))
    }

    pub fn exp_bound(&self) -> i64 {
        self.exp_bound.unwrap_or_else(|| {
            let s = self.max_filtration as i64;
            [self.c.0 + self.d.0, self.c.1 + self.d.1 + s]
                .iter()
                .map(|x| (x.abs() + 1) / 2)
                .max()
                .unwrap_or(0)
        })
    }

    fn validate(&self) -> Result<()> {
        if self.c.0 > self.c.1 || self.d.0 > self.d.1 {
            return Err(Error::WindowTooSmall(format!("empty window c={:?} d={:?}", self.c, self.d)));
        }
        if self.exp_bound.is_some_and(|e| e < 0) {
            return Err(Error::WindowTooSmall("negative exponent bound".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    PageByPage,
    ClosedForm,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChartCell {
    pub degree: RO2Degree,
    pub classes: Vec<EinftyEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EinftyChart {
    pub ring: String,
    pub window: Window,
    pub exp_bound: i64,
    pub collapse_page: u32,
    /// Nonempty degrees in increasing order of `(c, d)`.
    pub cells: Vec<ChartCell>,
}

impl EinftyChart {
    pub fn at(&self, x: RO2Degree) -> &[EinftyEntry] {
        match self.cells.binary_search_by_key(&x, |c| c.degree) {
            Ok(i) => &self.cells[i].classes,
            Err(_) => &[],
        }
    }

    pub fn max_filtration(&self) -> Option<u32> {
        self.cells.iter().flat_map(|c| c.classes.iter().map(|e| e.filtration)).max()
    }

    /// First degree where the two charts differ.
    pub fn first_difference(&self, other: &EinftyChart) -> Option<RO2Degree> {
        self.window
            .degrees()
            .chain(other.window.degrees())
            .find(|&x| self.at(x) != other.at(x))
    }
}

/// `2`-adic valuation, `None` for `0`.
pub(crate) fn val2(m: i64) -> Option<u32> {
    (m != 0).then(|| m.trailing_zeros())
}

/// Page `2^{e+2}-1` on which `d` can be nonzero, as `e`.
pub(crate) fn page_index(r: u32) -> Option<usize> {
    let x = r.checked_add(1)?;
    (x.is_power_of_two() && x >= 4).then(|| x.trailing_zeros() as usize - 2)
}

pub fn page_of(e: usize) -> u32 {
    (1u32 << (e + 2)) - 1
}

/// `E_2` classes in degree `x` with filtration at most `max_filtration`.
pub fn e2_basis(spec: &RingSpec, x: RO2Degree, max_filtration: u32, exp_bound: i64) -> Vec<PageClass> {
    let mut out = Vec::new();
    for s in 0..=max_filtration {
        let Some((w, m)) = solve_degree(x, s) else { continue };
        for w_bar in spec.monomials_of_weight(w, exp_bound) {
            out.push(PageClass { w_bar, s, m });
        }
    }
    out
}

/// `(weight, m)` of the classes at `(x, s)`.
pub(crate) fn solve_degree(x: RO2Degree, s: u32) -> Option<(i64, i64)> {
    let s = s as i64;
    let (p, q) = (x.c + x.d + s, x.c - x.d - s);
    (p % 2 == 0 && q % 4 == 0).then_some((p / 2, q / 4))
}

/// `d_r(a^s u^m w)`, or `None` when it vanishes.
pub fn differential(spec: &RingSpec, class: &PageClass, r: u32) -> Result<Option<PageClass>> {
    let e = page_index(r).ok_or_else(|| Error::Precondition(format!("d_{r}: page must be 2^k - 1 with k >= 2")))?;
    if val2(class.m) != Some(e as u32) {
        return Ok(None);
    }
    let Some(v) = spec.effective_v(e + 1) else { return Ok(None) };
    let target = PageClass { w_bar: class.w_bar.mul(v), s: class.s + r, m: class.m - (1 << e) };
    debug_assert_eq!(target.degree(spec), class.degree(spec) - RO2Degree::new(1, 0));
    Ok(Some(target))
}

/// Cycle for every differential.
pub(crate) fn closed_is_cycle(spec: &RingSpec, x: &PageClass) -> bool {
    let Some(e) = val2(x.m) else { return true };
    let e = e as usize;
    match spec.effective_v(e + 1) {
        None => true,
        Some(v) => spec.in_ideal(&x.w_bar.mul(v), e),
    }
}

/// Hit by some differential.
pub(crate) fn closed_is_boundary(spec: &RingSpec, x: &PageClass) -> bool {
    if x.s == 0 {
        return false;
    }
    (1..=spec.effective_height()).any(|i| {
        let v = spec.effective_v(i).expect("within effective height");
        spec.divides(v, &x.w_bar)
            && x.s >= (1u32 << (i + 1)) - 1
            && val2(x.m).is_none_or(|t| t as usize >= i)
    })
}

fn tally(counts: &mut Vec<EinftyEntry>, filtration: u32, group: Group, k: u64) {
    if k > 0 {
        counts.push(EinftyEntry { filtration, group, multiplicity: k });
    }
}

fn closed_form(spec: &RingSpec, window: &Window) -> Vec<ChartCell> {
    let bound = window.exp_bound();
    let mut cells = Vec::new();
    for x in window.degrees() {
        let mut classes = Vec::new();
        for s in 0..=window.max_filtration {
            let Some((w, m)) = solve_degree(x, s) else { continue };
            let monos = spec.monomials_of_weight(w, bound);
            let total = monos.len() as u64;
            let survivors = monos
                .into_iter()
                .map(|w_bar| PageClass { w_bar, s, m })
                .filter(|c| closed_is_cycle(spec, c) && !closed_is_boundary(spec, c))
                .count() as u64;
            if s == 0 {
                tally(&mut classes, 0, Group::Z, survivors);
                tally(&mut classes, 0, Group::ZDiv2, total - survivors);
            } else {
                tally(&mut classes, s, Group::Z2, survivors);
            }
        }
        if !classes.is_empty() {
            cells.push(ChartCell { degree: x, classes });
        }
    }
    cells
}

pub fn compute_einfty(spec: &RingSpec, window: &Window, strategy: Strategy) -> Result<EinftyChart> {
    window.validate()?;
    let cells = match strategy {
        Strategy::ClosedForm => closed_form(spec, window),
        Strategy::PageByPage => page::run(spec, window)?.cells,
    };
    Ok(EinftyChart {
        ring: spec.name.clone(),
        window: *window,
        exp_bound: window.exp_bound(),
        collapse_page: spec.collapse_page(),
        cells,
    })
}

/// Pages on which the page-by-page run saw a nonzero differential.
pub fn fired_pages(spec: &RingSpec, window: &Window) -> Result<Vec<u32>> {
    window.validate()?;
    Ok(page::run(spec, window)?.fired)
}
