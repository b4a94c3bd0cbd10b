//! Page-by-page evaluation with explicit `F_2` linear algebra.
//!
//! Every cell `(c, d, s)` of a padded window carries its `E_2` basis (monomials of the
//! right weight) and a pair of subspaces `B ⊆ Z` whose quotient is the current page.
//! Filtration 0 is tracked modulo 2: twice any class is a permanent cycle, so the
//! cycle lattice is determined by its reduction.

use std::collections::HashMap;

use rayon::prelude::*;

use super::f2::{self, Subspace, Vector};
use super::ring::{Monomial, RingSpec};
use super::{differential, page_of, solve_degree, tally, ChartCell, Group, PageClass, RO2Degree, Window, MAX_CELLS};
use crate::{Error, Result};

type Key = (i64, i64, u32);

struct Cell {
    m: i64,
    basis: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    /// Basis vectors `< outside` have some invertible exponent beyond the report bound.
    outside: usize,
    z: Subspace,
    b: Subspace,
}

pub(super) struct PageRun {
    pub cells: Vec<ChartCell>,
    pub fired: Vec<u32>,
}

pub(super) fn run(spec: &RingSpec, window: &Window) -> Result<PageRun> {
    let bound = window.exp_bound();
    let h = spec.effective_height();
    // One page beyond the effective height, to observe that it is silent.
    let pages: Vec<u32> = (0..=h).map(page_of).collect();
    let pad_c = h as i64;
    let pad_s: u32 = (0..h).map(page_of).sum();
    let pad_e: i64 = (1..=h).map(|j| spec.v_exponent_span(j)).sum();
    let c_range = (window.c.0 - pad_c, window.c.1 + pad_c);
    let s_max = window.max_filtration + pad_s;

    let span = |(a, b): (i64, i64)| (b - a + 1) as usize;
    let count = span(c_range) * span(window.d) * (s_max as usize + 1);
    if count > MAX_CELLS {
        return Err(Error::Unsupported(format!("padded window has {count} cells, limit {MAX_CELLS}")));
    }

    let keys: Vec<Key> = (c_range.0..=c_range.1)
        .flat_map(|c| (window.d.0..=window.d.1).flat_map(move |d| (0..=s_max).map(move |s| (c, d, s))))
        .filter(|&(c, d, s)| solve_degree(RO2Degree::new(c, d), s).is_some())
        .collect();
    let mut cells: HashMap<Key, Cell> = keys
        .par_iter()
        .map(|&(c, d, s)| {
            let (w, m) = solve_degree(RO2Degree::new(c, d), s).expect("filtered");
            let all = spec.monomials_of_weight(w, bound + pad_e);
            let beyond = |x: &Monomial| {
                x.0.iter().zip(&spec.generators).any(|(e, g)| g.invertible && e.abs() > bound)
            };
            let (mut basis, inside): (Vec<_>, Vec<_>) = all.into_iter().partition(|x| beyond(x));
            let outside = basis.len();
            basis.extend(inside);
            let index = basis.iter().cloned().enumerate().map(|(i, x)| (x, i)).collect();
            let n = basis.len();
            ((c, d, s), Cell { m, basis, index, outside, z: Subspace::full(n), b: Subspace::zero(n) })
        })
        .collect();

    let mut fired = Vec::new();
    for &r in &pages {
        // Image of each basis vector of each cell under d_r, in the target cell's coordinates.
        let images: HashMap<Key, Vec<Vector>> = keys
            .par_iter()
            .filter_map(|&key| {
                let (c, d, s) = key;
                let cell = &cells[&key];
                let target = cells.get(&(c - 1, d, s + r))?;
                let n = target.basis.len();
                let mut any = false;
                let imgs: Vec<Vector> = cell
                    .basis
                    .iter()
                    .map(|w_bar| {
                        let mut y = f2::zero(n);
                        let class = PageClass { w_bar: w_bar.clone(), s, m: cell.m };
                        if let Some(t) = differential(spec, &class, r).expect("valid page") {
                            if let Some(&j) = target.index.get(&t.w_bar) {
                                f2::set(&mut y, j);
                                any = true;
                            }
                        }
                        y
                    })
                    .collect();
                any.then_some((key, imgs))
            })
            .collect();
        if images.is_empty() {
            continue;
        }
        let apply = |imgs: &[Vector], x: &Vector| -> Vector {
            let mut y = vec![0u64; imgs.first().map_or(0, Vec::len)];
            for i in f2::ones(x) {
                f2::xor(&mut y, &imgs[i]);
            }
            y
        };
        let updates: Vec<(Key, Option<Subspace>, Option<Subspace>, bool)> = keys
            .par_iter()
            .map(|&key| {
                let (c, d, s) = key;
                let cell = &cells[&key];
                let new_z = images.get(&key).map(|imgs| {
                    let target = &cells[&(c - 1, d, s + r)];
                    let zi: Vec<Vector> = cell.z.basis().map(|x| apply(imgs, x)).collect();
                    f2::restricted_kernel(&cell.z, &zi, &target.b)
                });
                let mut grew = false;
                let new_b = s.checked_sub(r).and_then(|s0| {
                    let src_key = (c + 1, d, s0);
                    let imgs = images.get(&src_key)?;
                    let src = &cells[&src_key];
                    let mut b = cell.b.clone();
                    for x in src.z.basis() {
                        grew |= b.insert(&apply(imgs, x));
                    }
                    Some(b)
                });
                (key, new_z, new_b, grew)
            })
            .collect();
        let mut any_fired = false;
        for (key, z, b, grew) in updates {
            let cell = cells.get_mut(&key).expect("known key");
            if let Some(z) = z {
                cell.z = z;
            }
            if let Some(b) = b {
                cell.b = b;
            }
            any_fired |= grew;
        }
        if any_fired {
            fired.push(r);
        }
    }

    let mut out = Vec::new();
    for x in window.degrees() {
        let mut classes = Vec::new();
        for s in 0..=window.max_filtration {
            let Some(cell) = cells.get(&(x.c, x.d, s)) else { continue };
            let inside_z: Vec<&Vector> = cell.z.tail_basis(cell.outside).collect();
            if s == 0 {
                let total = (cell.basis.len() - cell.outside) as u64;
                let div1 = inside_z.len() as u64;
                tally(&mut classes, 0, Group::Z, div1);
                tally(&mut classes, 0, Group::ZDiv2, total - div1);
            } else {
                let mut sum = cell.b.clone();
                let k = inside_z.into_iter().filter(|v| sum.insert(v)).count() as u64;
                tally(&mut classes, s, Group::Z2, k);
            }
        }
        if !classes.is_empty() {
            out.push(ChartCell { degree: x, classes });
        }
    }
    Ok(PageRun { cells: out, fired })
}
