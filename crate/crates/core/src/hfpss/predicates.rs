//! Properties read off `E_infinity` charts and rings.

use std::collections::{BTreeMap, HashSet};
use std::ops::RangeInclusive;

use serde::Serialize;

use super::ring::{Monomial, RingSpec};
use super::{differential, e2_basis, fired_pages, page_of, EinftyChart, Group, RO2Degree, Window};
use crate::{Error, Result};

/// `pi_{k rho - 1}` and `pi_{k rho - 2}` vanish and `pi_{k rho}` is generated by monomials
/// in filtration 0, for every `k` in `weights`.
pub fn is_strongly_even(chart: &EinftyChart, weights: RangeInclusive<i64>) -> Result<bool> {
    for k in weights {
        let spots = [RO2Degree::new(k, k), RO2Degree::new(k - 1, k), RO2Degree::new(k - 2, k)];
        if let Some(x) = spots.iter().find(|&&x| !chart.window.contains(x)) {
            return Err(Error::WindowTooSmall(format!("degree {} of weight {k} lies outside the chart", x.sigma_string())));
        }
        if !chart.at(spots[1]).is_empty() || !chart.at(spots[2]).is_empty() {
            return Ok(false);
        }
        if chart.at(spots[0]).iter().any(|e| e.filtration != 0 || e.group != Group::Z) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The chart agrees with its translate by `shift` wherever both degrees lie in the window.
pub fn is_periodic(chart: &EinftyChart, shift: RO2Degree) -> bool {
    chart
        .window
        .degrees()
        .filter(|&x| chart.window.contains(x + shift))
        .all(|x| chart.at(x) == chart.at(x + shift))
}

/// Reduction mod 2 of an integer combination of monomials; `Ok(None)` is zero.
pub fn reduce_mod2(terms: &[(i64, Monomial)]) -> Result<Option<Monomial>> {
    let mut sum: BTreeMap<&Monomial, i64> = BTreeMap::new();
    for (c, m) in terms {
        *sum.entry(m).or_default() += c;
    }
    let odd: Vec<&Monomial> = sum.into_iter().filter(|(_, c)| c % 2 != 0).map(|(m, _)| m).collect();
    match odd[..] {
        [] => Ok(None),
        [m] => Ok(Some(m.clone())),
        _ => Err(Error::Unsupported(format!("image has {} monomials mod 2; only monomial images are supported", odd.len()))),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TransferLevel {
    pub level: usize,
    pub injective: bool,
    /// A source monomial that is killed or collides, when not injective.
    pub witness: Option<String>,
}

/// Injectivity of `pi_*R/(2, v_1, ..., v_i) -> pi_*R'/(2, f(v_1), ..., f(v_i))` for
/// `i = 0..=h` on weights `-max_weight..=max_weight`.
pub fn transfer_check(
    source: &RingSpec,
    target: &RingSpec,
    map: &[(String, String)],
    max_weight: i64,
) -> Result<Vec<TransferLevel>> {
    let mut images: Vec<Option<Monomial>> = Vec::new();
    for g in &source.generators {
        let (_, text) = map
            .iter()
            .find(|(s, _)| s == &g.sym)
            .ok_or_else(|| Error::Precondition(format!("no image given for generator `{}`", g.sym)))?;
        let img = reduce_mod2(&target.parse_polynomial(text)?)?;
        if let Some(m) = &img {
            if target.weight(m) != g.weight {
                return Err(Error::Precondition(format!("image of `{}` has weight {}, expected {}", g.sym, target.weight(m), g.weight)));
            }
        }
        images.push(img);
    }
    let image_of = |m: &Monomial| -> Result<Option<Monomial>> {
        let mut out = Monomial::one(target.generators.len());
        for (e, img) in m.0.iter().zip(&images) {
            if *e == 0 {
                continue;
            }
            let Some(img) = img else { return Ok(None) };
            out = out.mul(&Monomial(img.0.iter().map(|x| x * e).collect()));
        }
        if out.0.iter().zip(&target.generators).any(|(e, g)| *e < 0 && !g.invertible) {
            return Err(Error::Unsupported("a negative power maps to a non-unit".into()));
        }
        Ok(Some(out))
    };
    let mut v_images: Vec<Option<Monomial>> = Vec::new();
    for v in &source.v {
        v_images.push(match v {
            Some(v) => image_of(v)?,
            None => None,
        });
    }
    let source_monos: Vec<Monomial> =
        (-max_weight..=max_weight).flat_map(|w| source.monomials_of_weight(w, max_weight)).collect();
    let mut out = Vec::new();
    for i in 0..=source.height() {
        let in_target_ideal = |p: &Monomial| v_images.iter().take(i).flatten().any(|v| target.divides(v, p));
        let mut seen = HashSet::new();
        let mut witness = None;
        for m in source_monos.iter().filter(|m| !source.in_ideal(m, i)) {
            let ok = match image_of(m)? {
                Some(p) if !in_target_ideal(&p) => seen.insert(p),
                _ => false,
            };
            if !ok {
                witness = Some(source.format(m));
                break;
            }
        }
        out.push(TransferLevel { level: i, injective: witness.is_none(), witness });
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VChainReport {
    /// Smallest `j` with `v_j` in `(2, v_1, ..., v_{j-1})`.
    pub degenerate_index: Option<usize>,
    /// Every `d_r` with `r >= silent_from_page` vanishes.
    pub silent_from_page: u32,
    pub rule_silent: bool,
    pub engine_silent: bool,
}

impl VChainReport {
    pub fn ok(&self) -> bool {
        self.rule_silent && self.engine_silent
    }
}

pub fn v_chain_check(spec: &RingSpec) -> Result<VChainReport> {
    let j = spec.effective_height() + 1;
    let silent = page_of(j - 1);
    let window = Window { c: (-8, 8), d: (-8, 8), max_filtration: 8, exp_bound: Some(4) };
    let mut rule_silent = true;
    'outer: for x in window.degrees() {
        for class in e2_basis(spec, x, window.max_filtration, 4) {
            for e in (j - 1)..(j + 3) {
                if differential(spec, &class, page_of(e))?.is_some() {
                    rule_silent = false;
                    break 'outer;
                }
            }
        }
    }
    let engine_silent = fired_pages(spec, &window)?.iter().all(|&r| r < silent);
    Ok(VChainReport { degenerate_index: spec.degenerate_index(), silent_from_page: silent, rule_silent, engine_silent })
}
