//! Bookkeeping for `TMF^G` with `G` finite abelian.
//!
//! `Hom(G^, E)` decomposes into components indexed by subgroups `K ⊆ G` with `G/K`
//! generated by two elements; the component of `K` is the moduli of elliptic curves with
//! an embedding of `G/K` into the torsion points.

use std::collections::BTreeMap;

use num_integer::Integer;
use serde::Serialize;

use crate::cohomology::S1Table;
use crate::levels::divisors;
use crate::splitting::{shift_polynomial, torsion_condition, Base, ShiftPolynomial, Torsion};
use crate::{Error, Result};

pub const MAX_GROUP_ORDER: u64 = 10_000;
pub const MAX_SUBGROUPS: usize = 200_000;

/// `Z/n_1 ⊕ ... ⊕ Z/n_r` with `n_{i+1} | n_i` and every `n_i > 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct FiniteAbelian {
    pub factors: Vec<u64>,
}

impl FiniteAbelian {
    pub fn trivial() -> Self {
        Self { factors: Vec::new() }
    }

    pub fn cyclic(n: u64) -> Result<Self> {
        Self::from_orders(&[n])
    }

    /// Normalizes any list of cyclic orders to invariant-factor form.
    pub fn from_orders(orders: &[u64]) -> Result<Self> {
        if orders.contains(&0) {
            return Err(Error::Precondition("cyclic factors must have positive order".into()));
        }
        let order = orders.iter().try_fold(1u64, |a, &b| a.checked_mul(b));
        match order {
            Some(o) if o <= MAX_GROUP_ORDER => {}
            _ => return Err(Error::GroupTooLarge(format!("order exceeds {MAX_GROUP_ORDER}"))),
        }
        let diag: Vec<i64> = orders.iter().map(|&n| n as i64).collect();
        Ok(Self { factors: invariant_factors(diagonal_matrix(&diag)) })
    }

    pub fn order(&self) -> u64 {
        self.factors.iter().product()
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }
}

fn diagonal_matrix(d: &[i64]) -> Vec<Vec<i64>> {
    (0..d.len()).map(|i| (0..d.len()).map(|j| if i == j { d[i] } else { 0 }).collect()).collect()
}

/// Invariant factors `> 1` of `Z^r / rowspace(m)`, largest first.
fn invariant_factors(mut m: Vec<Vec<i64>>) -> Vec<u64> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    for t in 0..rows.min(cols) {
        loop {
            let Some((pi, pj)) = (t..rows)
                .flat_map(|i| (t..cols).map(move |j| (i, j)))
                .filter(|&(i, j)| m[i][j] != 0)
                .min_by_key(|&(i, j)| m[i][j].abs())
            else {
                break;
            };
            m.swap(t, pi);
            for row in m.iter_mut() {
                row.swap(t, pj);
            }
            let p = m[t][t];
            let mut clean = true;
            for i in t + 1..rows {
                let q = m[i][t] / p;
                for j in t..cols {
                    m[i][j] -= q * m[t][j];
                }
                clean &= m[i][t] == 0;
            }
            for j in t + 1..cols {
                let q = m[t][j] / p;
                for i in t..rows {
                    m[i][j] -= q * m[i][t];
                }
                clean &= m[t][j] == 0;
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| m[i][j] % p != 0));
            match bad {
                Some(i) => {
                    for j in t..cols {
                        m[t][j] += m[i][j];
                    }
                }
                None => break,
            }
        }
        if t < rows && t < cols {
            diag.push(m[t][t].unsigned_abs());
        }
    }
    let mut f: Vec<u64> = diag.into_iter().filter(|&d| d != 1).collect();
    for (i, d) in f.iter_mut().enumerate() {
        if *d == 0 {
            panic!("quotient of index-finite lattice has infinite factor at {i}");
        }
    }
    f.sort_unstable_by(|a, b| b.cmp(a));
    f
}

/// A subgroup `K = L / diag(n) Z^r` for a lattice `L` in Hermite normal form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Subgroup {
    /// Generators of `K` as elements of `G`.
    pub generators: Vec<Vec<u64>>,
    pub order: u64,
    /// Invariant factors of `G/K`.
    pub quotient: Vec<u64>,
}

/// Contained in the lattice spanned by the upper triangular `rows` (rows `j..`).
fn in_lattice(rows: &[Vec<i64>], j0: usize, v: &[i64]) -> bool {
    let mut v = v.to_vec();
    for j in j0..v.len() {
        let h = rows[j][j];
        if v[j] % h != 0 {
            return false;
        }
        let x = v[j] / h;
        for k in j..v.len() {
            v[k] -= x * rows[j][k];
        }
    }
    v.iter().all(|&x| x == 0)
}

pub fn subgroups(g: &FiniteAbelian) -> Result<Vec<Subgroup>> {
    if g.order() > MAX_GROUP_ORDER {
        return Err(Error::GroupTooLarge(format!("|G| = {} exceeds {MAX_GROUP_ORDER}", g.order())));
    }
    let r = g.rank();
    let n: Vec<i64> = g.factors.iter().map(|&x| x as i64).collect();
    let mut rows = vec![vec![0i64; r]; r];
    let mut out = Vec::new();
    fill(r, &n, &mut rows, &mut out)?;
    let order = g.order();
    Ok(out
        .into_iter()
        .map(|rows| {
            let index: u64 = (0..r).map(|j| rows[j][j] as u64).product();
            let generators = rows
                .iter()
                .filter(|row| row.iter().zip(&n).any(|(x, m)| x.rem_euclid(*m) != 0))
                .map(|row| row.iter().zip(&n).map(|(x, m)| x.rem_euclid(*m) as u64).collect())
                .collect();
            Subgroup { generators, order: order / index, quotient: invariant_factors(rows) }
        })
        .collect())
}

/// Fills HNF rows `j-1, j-2, ..., 0` below the already fixed rows.
fn fill(j: usize, n: &[i64], rows: &mut Vec<Vec<i64>>, out: &mut Vec<Vec<Vec<i64>>>) -> Result<()> {
    if j == 0 {
        if out.len() >= MAX_SUBGROUPS {
            return Err(Error::GroupTooLarge(format!("more than {MAX_SUBGROUPS} subgroups")));
        }
        out.push(rows.clone());
        return Ok(());
    }
    let row = j - 1;
    let r = n.len();
    for h in divisors(n[row] as u64) {
        rows[row] = vec![0; r];
        rows[row][row] = h as i64;
        let free: Vec<usize> = (row + 1..r).collect();
        let mut counters = vec![0i64; free.len()];
        loop {
            for (slot, &k) in free.iter().enumerate() {
                rows[row][k] = counters[slot];
            }
            let mut e = vec![0i64; r];
            e[row] = n[row];
            if in_lattice(rows, row, &e) {
                fill(row, n, rows, out)?;
            }
            let mut slot = 0;
            loop {
                if slot == free.len() {
                    break;
                }
                counters[slot] += 1;
                if counters[slot] < rows[free[slot]][free[slot]] {
                    break;
                }
                counters[slot] = 0;
                slot += 1;
            }
            if slot == free.len() {
                break;
            }
        }
    }
    rows[row] = vec![0; r];
    Ok(())
}

pub fn component_label(quotient: &[u64]) -> String {
    match quotient {
        [] => "M_ell".into(),
        [k] => format!("M1({k})"),
        [a, b] => format!("M^({a},{b})"),
        _ => unreachable!("only 2-generated quotients index components"),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Component {
    pub subgroup: Subgroup,
    pub quotient: Vec<u64>,
    pub label: String,
    pub multiplicity: u64,
}

/// One component for each subgroup `K` with `G/K` generated by at most two elements.
pub fn components(g: &FiniteAbelian) -> Result<Vec<Component>> {
    Ok(subgroups(g)?
        .into_iter()
        .filter(|k| k.quotient.len() <= 2)
        .map(|k| Component { quotient: k.quotient.clone(), label: component_label(&k.quotient), multiplicity: 1, subgroup: k })
        .collect())
}

/// Components grouped by quotient type, with multiplicities.
pub fn component_summary(components: &[Component]) -> Vec<(String, u64)> {
    let mut by: BTreeMap<(usize, Vec<u64>), u64> = BTreeMap::new();
    for c in components {
        *by.entry((c.quotient.len(), c.quotient.clone())).or_default() += c.multiplicity;
    }
    by.into_iter().map(|((_, q), k)| (component_label(&q), k)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CyclicPiece {
    pub k: u64,
    pub shifts: ShiftPolynomial,
    pub torsion: Torsion,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CyclicSplit {
    pub n: u64,
    pub prime: u64,
    pub base: Base,
    /// The factor `TMF` for `k = 1`.
    pub unit: u64,
    pub pieces: Vec<CyclicPiece>,
}

impl CyclicSplit {
    pub fn total_rank(&self) -> u64 {
        self.pieces.iter().map(|p| p.shifts.total_rank()).sum()
    }
}

/// `TMF^{Z/n} = prod_{k|n} TMF_1(k)` with each `k >= 2` split over the base at `l`.
pub fn cyclic_full_split(n: u64, l: u64, table: &S1Table) -> Result<CyclicSplit> {
    let base = Base::for_prime(l)?;
    if l != 0 && n.gcd(&l) != 1 {
        return Err(Error::Precondition(format!("{l} divides {n}")));
    }
    let mut pieces = Vec::new();
    for k in divisors(n).into_iter().filter(|&k| k >= 2) {
        let shifts = shift_polynomial(k, base, table)?;
        let torsion = if l == 0 { Torsion::Holds } else { torsion_condition(k, l, table)? };
        pieces.push(CyclicPiece { k, shifts, torsion });
    }
    Ok(CyclicSplit { n, prime: l, base, unit: 1, pieces })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::levels::dsum_f;

    fn labels(g: &FiniteAbelian) -> Vec<String> {
        let mut v: Vec<_> = components(g).unwrap().into_iter().map(|c| c.label).collect();
        v.sort();
        v
    }

    #[test]
    fn normal_form() {
        assert_eq!(FiniteAbelian::from_orders(&[2, 3]).unwrap().factors, vec![6]);
        assert_eq!(FiniteAbelian::from_orders(&[2, 4, 1]).unwrap().factors, vec![4, 2]);
        assert_eq!(FiniteAbelian::from_orders(&[6, 4]).unwrap().factors, vec![12, 2]);
        assert!(FiniteAbelian::from_orders(&[101, 101]).is_err());
    }

    #[test]
    fn subgroup_counts() {
        let c = |o: &[u64]| subgroups(&FiniteAbelian::from_orders(o).unwrap()).unwrap().len();
        assert_eq!(c(&[6]), 4);
        assert_eq!(c(&[2, 2]), 5);
        assert_eq!(c(&[4, 2]), 8);
        assert_eq!(c(&[]), 1);
        assert_eq!(c(&[2, 2, 2]), 16);
    }

    #[test]
    fn component_examples() {
        assert_eq!(labels(&FiniteAbelian::cyclic(6).unwrap()), vec!["M1(2)", "M1(3)", "M1(6)", "M_ell"]);
        let summary = component_summary(&components(&FiniteAbelian::from_orders(&[2, 2]).unwrap()).unwrap());
        assert_eq!(summary, vec![("M_ell".into(), 1), ("M1(2)".into(), 3), ("M^(2,2)".into(), 1)]);
        assert_eq!(labels(&FiniteAbelian::trivial()), vec!["M_ell"]);
        // (Z/2)^3 has one subgroup with a 3-generated quotient.
        assert_eq!(components(&FiniteAbelian::from_orders(&[2, 2, 2]).unwrap()).unwrap().len(), 15);
    }

    #[test]
    fn torsion_degree_sum() {
        for n in 1..=100u64 {
            let s: u64 = divisors(n).into_iter().map(dsum_f).sum();
            assert_eq!(s, n * n, "n={n}");
        }
    }

    #[test]
    fn cyclic_splits() {
        let t = S1Table::builtin();
        let s5 = cyclic_full_split(5, 2, &t).unwrap();
        assert_eq!(s5.pieces.len(), 1);
        assert_eq!(s5.pieces[0].shifts.q.coeffs(), &[1, 1, 1]);
        assert!(cyclic_full_split(1, 3, &t).unwrap().pieces.is_empty());
        // s1(35) is only known to differ from 1; any value gives the same total rank.
        let mut t35 = S1Table::builtin();
        t35.insert_user(35, 0);
        let s35 = cyclic_full_split(35, 2, &t35).unwrap();
        assert_eq!(s35.pieces.iter().map(|p| p.k).collect::<Vec<_>>(), vec![5, 7, 35]);
        let expected: u64 = [5u64, 7, 35].iter().map(|&k| dsum_f(k) * 3 / 24).sum();
        assert_eq!(s35.total_rank(), expected);
        assert!(matches!(cyclic_full_split(35, 2, &t), Err(Error::NeedsS1 { n: 35 })));
        assert!(cyclic_full_split(10, 2, &t).is_err());
    }
}
