//! Descent spectral sequence charts, slice lists and the Anderson-duality rank symmetry.
//!
//! In the tame case the spectral sequence `H^q(omega^p) => pi_{2p-q}` collapses with
//! only the rows `q = 0, 1` occupied, so a chart is a relabelling of a [`RankTable`].

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::cohomology::{rank_table, Rank, RankTable, S1Table};
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Marker {
    Exact,
    NeedsS1,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChartEntry {
    pub stem: i64,
    pub filtration: u8,
    /// For [`Marker::NeedsS1`] this is the part of the rank not involving `s1`.
    pub rank: u64,
    pub marker: Marker,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chart {
    pub n: u64,
    pub range: (i64, i64),
    pub entries: Vec<ChartEntry>,
}

impl Chart {
    pub fn entry(&self, stem: i64, filtration: u8) -> Option<&ChartEntry> {
        self.entries.iter().find(|e| e.stem == stem && e.filtration == filtration)
    }

    pub fn stems(&self) -> RangeInclusive<i64> {
        self.range.0..=self.range.1
    }
}

/// Weight and row contributing to stem `m`.
fn position(m: i64) -> (i64, u8) {
    if m.rem_euclid(2) == 0 {
        (m.div_euclid(2), 0)
    } else {
        ((m + 1).div_euclid(2), 1)
    }
}

fn weight_window(stems: &RangeInclusive<i64>) -> RangeInclusive<i64> {
    let (a, b) = (*stems.start(), *stems.end());
    if a > b {
        #[allow(clippy::reversed_empty_ranges)]
        return 1..=0;
    }
    position(a).0..=position(b).0
}

fn rank_at(t: &RankTable, m: i64) -> (u8, Rank) {
    let (k, q) = position(m);
    let r = if q == 0 { t.h0(k) } else { t.h1(k) };
    (q, r.expect("weight inside the table window"))
}

fn entry_from(stem: i64, filtration: u8, r: Rank) -> Option<ChartEntry> {
    match r {
        Rank::Exact { rank: 0 } => None,
        Rank::Exact { rank } => Some(ChartEntry { stem, filtration, rank, marker: Marker::Exact }),
        Rank::NeedsS1 { lower_bound } => {
            Some(ChartEntry { stem, filtration, rank: lower_bound, marker: Marker::NeedsS1 })
        }
    }
}

/// Nonzero positions of the `E_2 = E_infinity` page for stems in `stems`.
pub fn dss_chart(n: u64, stems: RangeInclusive<i64>, table: &S1Table) -> Result<Chart> {
    let t = rank_table(n, weight_window(&stems), table)?;
    let entries = stems
        .clone()
        .filter_map(|m| {
            let (q, r) = rank_at(&t, m);
            entry_from(m, q, r)
        })
        .collect();
    Ok(Chart { n, range: (*stems.start(), *stems.end()), entries })
}

/// `k rho` when `minus_one` is false, `k rho - 1` otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RhoShift {
    pub k: i64,
    pub minus_one: bool,
}

impl std::fmt::Display for RhoShift {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let base = match self.k {
            0 => String::new(),
            1 => "rho".into(),
            -1 => "-rho".into(),
            k => format!("{k}rho"),
        };
        match (base.is_empty(), self.minus_one) {
            (true, false) => write!(f, "0"),
            (true, true) => write!(f, "-1"),
            (false, false) => write!(f, "{base}"),
            (false, true) => write!(f, "{base}-1"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Slice {
    pub index: i64,
    pub shift: RhoShift,
    pub rank: Rank,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SliceList {
    pub n: u64,
    pub slices: Vec<Slice>,
}

/// Slice `2k` is `Sigma^{k rho} H(H^0(omega^k))`, slice `2k-1` is `Sigma^{k rho - 1} H(H^1(omega^k))`.
pub fn slices(n: u64, range: RangeInclusive<i64>, table: &S1Table) -> Result<SliceList> {
    let t = rank_table(n, weight_window(&range), table)?;
    let slices = range
        .map(|m| {
            let (q, r) = rank_at(&t, m);
            let (k, _) = position(m);
            Slice { index: m, shift: RhoShift { k, minus_one: q == 1 }, rank: r }
        })
        .collect();
    Ok(SliceList { n, slices })
}

/// Rank of `pi_m` for every stem `m` in the range.
pub fn stem_ranks(n: u64, stems: RangeInclusive<i64>, table: &S1Table) -> Result<BTreeMap<i64, Rank>> {
    let t = rank_table(n, weight_window(&stems), table)?;
    Ok(stems.map(|m| (m, rank_at(&t, m).1)).collect())
}

/// Ranks of the Anderson dual: `rank pi_m(I_Z X) = rank pi_{-m} X`.
pub fn anderson_dual_ranks(ranks: &BTreeMap<i64, Rank>) -> BTreeMap<i64, Rank> {
    ranks.iter().map(|(&m, &r)| (-m, r)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Symmetry {
    Holds,
    Fails { stem: i64, rank: u64, partner_stem: i64, partner_rank: u64 },
    /// Only `s1`-dependent pairs remain undecided.
    Unknown,
}

impl Symmetry {
    pub fn holds(self) -> bool {
        self == Symmetry::Holds
    }
}

/// Checks `rank pi_m = rank pi_{-m-l}` over all pairs with both stems in `window`.
///
/// A pair of exact ranks that differ is reported even if other pairs depend on `s1`.
pub fn anderson_symmetry_check(n: u64, l: i64, window: RangeInclusive<i64>, table: &S1Table) -> Result<Symmetry> {
    let ranks = stem_ranks(n, window.clone(), table)?;
    Ok(symmetry_of(&ranks, l, &window))
}

fn symmetry_of(ranks: &BTreeMap<i64, Rank>, l: i64, window: &RangeInclusive<i64>) -> Symmetry {
    let mut unknown = false;
    for m in window.clone() {
        let partner = -m - l;
        if !window.contains(&partner) || partner < m {
            continue;
        }
        match (ranks[&m], ranks[&partner]) {
            (Rank::Exact { rank: a }, Rank::Exact { rank: b }) if a != b => {
                return Symmetry::Fails { stem: m, rank: a, partner_stem: partner, partner_rank: b };
            }
            (Rank::Exact { .. }, Rank::Exact { .. }) => {}
            _ => unknown = true,
        }
    }
    if unknown {
        Symmetry::Unknown
    } else {
        Symmetry::Holds
    }
}

/// Every `l` in `shifts` for which the symmetry holds on `window`.
pub fn symmetric_shifts(
    n: u64,
    window: RangeInclusive<i64>,
    shifts: RangeInclusive<i64>,
    table: &S1Table,
) -> Result<Vec<i64>> {
    let ranks = stem_ranks(n, window.clone(), table)?;
    Ok(shifts.filter(|&l| symmetry_of(&ranks, l, &window).holds()).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Ascii,
    Svg,
}

/// Fixed geometry of the SVG output.
#[derive(Debug, Clone, Copy)]
pub struct SvgLayout {
    pub cell: i64,
    pub margin: i64,
    pub font_size: i64,
    pub box_inset: i64,
}

pub const SVG_LAYOUT: SvgLayout = SvgLayout { cell: 48, margin: 40, font_size: 14, box_inset: 6 };

fn label(e: &ChartEntry) -> String {
    match e.marker {
        Marker::Exact => format!("[{}]", e.rank),
        Marker::NeedsS1 => format!("[{}+s1]", e.rank),
    }
}

pub fn render(chart: &Chart, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(chart).expect("chart serializes");
            s.push('\n');
            s
        }
        Format::Ascii => render_ascii(chart),
        Format::Svg => render_svg(chart, &SVG_LAYOUT),
    }
}

fn render_ascii(chart: &Chart) -> String {
    let stems: Vec<i64> = chart.stems().collect();
    let width = stems
        .iter()
        .map(|m| m.to_string().len())
        .chain(chart.entries.iter().map(|e| label(e).len()))
        .max()
        .unwrap_or(0)
        + 1;
    let mut out = String::new();
    let _ = writeln!(out, "Tmf_1({}) descent spectral sequence, stems {}..{}", chart.n, chart.range.0, chart.range.1);
    for q in [1u8, 0] {
        let _ = write!(out, "q={q} |");
        for &m in &stems {
            let cell = chart.entry(m, q).map(label).unwrap_or_default();
            let _ = write!(out, "{cell:>width$}");
        }
        out.push('\n');
    }
    let _ = writeln!(out, "    +{}", "-".repeat(width * stems.len()));
    let _ = write!(out, "     ");
    for &m in &stems {
        let _ = write!(out, "{m:>width$}");
    }
    out.push('\n');
    if chart.entries.iter().any(|e| e.marker == Marker::NeedsS1) {
        out.push_str("s1 = dimension of weight-1 cusp forms (unknown for this level)\n");
    }
    out
}

fn render_svg(chart: &Chart, l: &SvgLayout) -> String {
    let stems: Vec<i64> = chart.stems().collect();
    let cols = stems.len() as i64;
    let w = 2 * l.margin + cols * l.cell;
    let h = 2 * l.margin + 2 * l.cell + l.font_size;
    let x0 = l.margin;
    let baseline = l.margin + 2 * l.cell;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" font-family="monospace" font-size="{}">"#,
        l.font_size
    );
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{w}" height="{h}" fill="white"/>"#);
    for i in 0..=cols {
        let x = x0 + i * l.cell;
        let _ = writeln!(s, r##"<line x1="{x}" y1="{}" x2="{x}" y2="{baseline}" stroke="#ccc"/>"##, l.margin);
    }
    for r in 0..=2 {
        let y = l.margin + r * l.cell;
        let _ = writeln!(s, r##"<line x1="{x0}" y1="{y}" x2="{}" y2="{y}" stroke="#ccc"/>"##, x0 + cols * l.cell);
    }
    for (i, m) in stems.iter().enumerate() {
        let cx = x0 + i as i64 * l.cell + l.cell / 2;
        let _ = writeln!(s, r#"<text x="{cx}" y="{}" text-anchor="middle">{m}</text>"#, baseline + l.font_size + 4);
    }
    for q in [0i64, 1] {
        let y = baseline - q * l.cell - l.cell / 2 + l.font_size / 2;
        let _ = writeln!(s, r#"<text x="{}" y="{y}" text-anchor="end">q={q}</text>"#, x0 - 4);
    }
    for e in &chart.entries {
        let Some(i) = stems.iter().position(|&m| m == e.stem) else { continue };
        let x = x0 + i as i64 * l.cell;
        let y = baseline - (e.filtration as i64 + 1) * l.cell;
        let side = l.cell - 2 * l.box_inset;
        let _ = writeln!(
            s,
            r#"<rect x="{}" y="{}" width="{side}" height="{side}" fill="none" stroke="black"/>"#,
            x + l.box_inset,
            y + l.box_inset
        );
        let text = match e.marker {
            Marker::Exact => e.rank.to_string(),
            Marker::NeedsS1 => format!("{}+s1", e.rank),
        };
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="middle">{text}</text>"#,
            x + l.cell / 2,
            y + l.cell / 2 + l.font_size / 2
        );
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t() -> S1Table {
        S1Table::builtin()
    }

    #[test]
    fn chart_of_level_23() {
        let c = dss_chart(23, -10..=10, &t()).unwrap();
        let row0: Vec<_> = c.entries.iter().filter(|e| e.filtration == 0).map(|e| (e.stem, e.rank)).collect();
        let row1: Vec<_> = c.entries.iter().filter(|e| e.filtration == 1).map(|e| (e.stem, e.rank)).collect();
        assert_eq!(row0, vec![(0, 1), (2, 12), (4, 33), (6, 55), (8, 77), (10, 99)]);
        assert_eq!(row1, vec![(-9, 99), (-7, 77), (-5, 55), (-3, 33), (-1, 12), (1, 1)]);
        assert!(c.entries.iter().all(|e| e.marker == Marker::Exact));
    }

    #[test]
    fn chart_of_level_5() {
        let c = dss_chart(5, 0..=4, &t()).unwrap();
        let got: Vec<_> = c.entries.iter().map(|e| (e.stem, e.filtration, e.rank)).collect();
        assert_eq!(got, vec![(0, 0, 1), (2, 0, 2), (4, 0, 3)]);
    }

    #[test]
    fn empty_range() {
        #[allow(clippy::reversed_empty_ranges)]
        let c = dss_chart(23, 5..=4, &t()).unwrap();
        assert!(c.entries.is_empty());
    }

    #[test]
    fn needs_s1_marker() {
        let c = dss_chart(101, 0..=2, &t()).unwrap();
        assert_eq!(c.entry(1, 1).unwrap().marker, Marker::NeedsS1);
        assert_eq!(c.entry(2, 0).unwrap().marker, Marker::NeedsS1);
        assert_eq!(c.entry(0, 0).unwrap().marker, Marker::Exact);
    }

    #[test]
    fn slice_labels() {
        let s = slices(23, -1..=1, &t()).unwrap();
        let by: BTreeMap<_, _> = s.slices.iter().map(|x| (x.index, (x.shift.to_string(), x.rank))).collect();
        assert_eq!(by[&1], ("rho-1".to_string(), Rank::Exact { rank: 1 }));
        assert_eq!(by[&-1], ("-1".to_string(), Rank::Exact { rank: 12 }));
        assert_eq!(by[&0].0, "0");
        let s7 = slices(7, 2..=40, &t()).unwrap();
        assert!(s7.slices.iter().filter(|x| x.index % 2 != 0).all(|x| x.rank == Rank::Exact { rank: 0 }));
        let s1 = slices(1, 0..=0, &t()).unwrap();
        assert_eq!(s1.slices[0].rank, Rank::Exact { rank: 1 });
    }

    #[test]
    fn symmetry_examples() {
        assert!(anderson_symmetry_check(23, -1, -10..=10, &t()).unwrap().holds());
        assert!(anderson_symmetry_check(1, 21, -30..=30, &t()).unwrap().holds());
        assert!(symmetric_shifts(9, -30..=30, -30..=30, &t()).unwrap().is_empty());
        assert!(matches!(
            anderson_symmetry_check(23, 1, -10..=10, &t()).unwrap(),
            Symmetry::Fails { .. }
        ));
    }

    #[test]
    fn dual_ranks_reflect() {
        let r = stem_ranks(23, -3..=3, &t()).unwrap();
        let d = anderson_dual_ranks(&r);
        assert_eq!(d[&3], r[&-3]);
        assert_eq!(d.len(), r.len());
    }

    #[test]
    fn ascii_shape() {
        let c = dss_chart(23, -10..=10, &t()).unwrap();
        let a = render(&c, Format::Ascii);
        let lines: Vec<&str> = a.lines().collect();
        assert!(lines[1].starts_with("q=1 |"));
        assert!(lines[2].starts_with("q=0 |"));
        for v in ["[1]", "[12]", "[33]", "[55]", "[77]", "[99]"] {
            assert!(lines[1].contains(v) && lines[2].contains(v), "{v}");
        }
    }

    #[test]
    fn json_round_trip() {
        let c = dss_chart(23, -10..=10, &t()).unwrap();
        let s = render(&c, Format::Json);
        let back: Chart = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["range"], serde_json::json!([-10, 10]));
        assert_eq!(v["entries"][0]["marker"], "exact");
    }

    #[test]
    fn svg_is_deterministic() {
        let c = dss_chart(5, 0..=4, &t()).unwrap();
        let a = render(&c, Format::Svg);
        assert_eq!(a, render(&c, Format::Svg));
        assert!(a.starts_with("<svg") && a.trim_end().ends_with("</svg>"));
        assert_eq!(a.matches("<rect").count(), 1 + c.entries.len());
    }
}
