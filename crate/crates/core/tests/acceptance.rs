//! Acceptance criteria, one line each. Runs without the libtest harness.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use tmf_level::charts::{anderson_symmetry_check, dss_chart, Marker, Symmetry};
use tmf_level::cli::dispatch;
use tmf_level::cohomology::S1Table;
use tmf_level::duality::{degreecomp_solutions, ratio_table};
use tmf_level::equivariant::{components, FiniteAbelian};
use tmf_level::hfpss::ring::RingSpec;
use tmf_level::hfpss::{
    compute_einfty, differential, fired_pages, is_periodic, is_strongly_even, page_of, Group, PageClass, RO2Degree,
    Strategy, Window,
};
use tmf_level::levels::{curve_invariants, divisors, dsum_f, dsum_g};
use tmf_level::splitting::{rational_multiplicities, shift_polynomial, Base, PalindromeVerdict};
use tmf_level::{Error, Rational64};

type Check = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn timed(limit: Duration, f: impl FnOnce() -> Check) -> Check {
    let start = Instant::now();
    f()?;
    let took = start.elapsed();
    ensure(took < limit, || format!("took {took:?}, limit {limit:?}"))
}

const DUALITY_ROWS: [(u64, i64); 12] =
    [(1, 21), (2, 13), (3, 9), (4, 7), (5, 5), (6, 5), (7, 3), (8, 3), (11, 1), (14, 1), (15, 1), (23, -1)];

fn duality_table() -> Check {
    timed(Duration::from_secs(1), || {
        let out = dispatch(["tmf-level", "duality", "--scan", "200"]);
        ensure(out.code == 0, || format!("exit {}: {}", out.code, out.stderr))?;
        let json: serde_json::Value = serde_json::from_str(&out.stdout).map_err(|e| e.to_string())?;
        let rows: Vec<(u64, i64)> = json["rows"]
            .as_array()
            .ok_or("no rows")?
            .iter()
            .map(|r| (r["n"].as_u64().unwrap_or(0), r["shift_l"].as_i64().unwrap_or(i64::MIN)))
            .collect();
        ensure(rows == DUALITY_ROWS, || format!("rows {rows:?}"))?;
        ensure(json["unknown"].as_array().is_some_and(Vec::is_empty), || "undecided levels".into())?;
        let table = dispatch(["tmf-level", "duality", "--scan", "200", "--format", "table"]);
        let lines: Vec<&str> = table.stdout.lines().collect();
        ensure(lines.len() == 12, || format!("{} table lines", lines.len()))?;
        for (line, (n, l)) in lines.iter().zip(DUALITY_ROWS) {
            let want = format!("n = {n} with l= {l}");
            ensure(line.starts_with(&want), || format!("`{line}` does not start with `{want}`"))?;
        }
        Ok(())
    })
}

fn chart_23() -> Check {
    let out = dispatch(["tmf-level", "chart", "--n", "23", "--range", "-10..10"]);
    ensure(out.code == 0, || format!("exit {}: {}", out.code, out.stderr))?;
    let chart: tmf_level::charts::Chart = serde_json::from_str(&out.stdout).map_err(|e| e.to_string())?;
    let ranks = [1, 12, 33, 55, 77, 99];
    let mut expected: Vec<(i64, u8, u64)> = Vec::new();
    for (i, &r) in ranks.iter().enumerate() {
        expected.push((2 * i as i64, 0, r));
        expected.push((1 - 2 * i as i64, 1, r));
    }
    expected.sort();
    let mut got: Vec<(i64, u8, u64)> = chart.entries.iter().map(|e| (e.stem, e.filtration, e.rank)).collect();
    got.sort();
    ensure(got == expected, || format!("entries {got:?}"))?;
    ensure(chart.entries.iter().all(|e| e.marker == Marker::Exact), || "inexact entry".into())?;
    let direct = dss_chart(23, -10..=10, &S1Table::builtin()).map_err(|e| e.to_string())?;
    ensure(direct == chart, || "CLI and library charts differ".into())
}

fn degree_search() -> Check {
    timed(Duration::from_secs(2), || {
        let sols = degreecomp_solutions(144);
        ensure(sols == [23, 32, 33, 35, 40, 42], || format!("solutions {sols:?}"))?;
        let bad = (145..=10_000u64).find(|&n| dsum_f(n) <= 12 * dsum_g(n));
        ensure(bad.is_none(), || format!("bound fails at {bad:?}"))
    })
}

fn splitting() -> Check {
    let t = S1Table::builtin();
    let q = |n, b| shift_polynomial(n, b, &t).map(|s| s.q.coeffs().to_vec()).map_err(|e| e.to_string());
    ensure(q(5, Base::L2)? == [1, 1, 1], || "Q_5 over Tmf_1(3)".into())?;
    ensure(q(5, Base::L3)? == [1, 2, 2, 2, 1], || "Q_5 over Tmf_1(2)".into())?;
    let mut checked = 0;
    for n in 5..=100u64 {
        let deg = curve_invariants(n).map_err(|e| e.to_string())?.deg_omega();
        for base in [Base::L2, Base::L3, Base::Rational] {
            let (e1, e2) = base.exponents();
            match shift_polynomial(n, base, &t) {
                Ok(s) => {
                    let want = deg * Rational64::from_integer(i64::from(e1 * e2));
                    ensure(Rational64::from_integer(s.total_rank() as i64) == want, || format!("rank at n={n} {base:?}"))?;
                    checked += 1;
                }
                Err(Error::NeedsS1 { .. }) | Err(Error::Precondition(_)) => {}
                Err(e) => return Err(format!("n={n} {base:?}: {e}")),
            }
        }
    }
    ensure(checked > 0, || "nothing checked".into())?;
    let r = rational_multiplicities(23, &t).map_err(|e| e.to_string())?;
    let c = r.shifts.q.coeffs();
    ensure(r.shifts.q.degree() == Some(11), || format!("degree {:?}", r.shifts.q.degree()))?;
    ensure(r.shifts.total_rank() == 528, || "Q(1)".into())?;
    ensure((0..c.len()).all(|j| c[j] == c[11 - j]), || "not palindromic".into())?;
    ensure(r.symmetry == PalindromeVerdict::Holds { twist: 1 }, || format!("{:?}", r.symmetry))
}

fn ratios() -> Check {
    let table: [(u64, &[(i64, i64)]); 8] = [
        (2, &[(2, 3), (5, 12), (1, 4), (7, 48), (1, 12), (3, 64), (5, 192)]),
        (3, &[(1, 2), (2, 9), (5, 54), (1, 27)]),
        (5, &[(1, 3), (7, 75), (3, 125)]),
        (7, &[(1, 4), (5, 98)]),
        (11, &[(1, 6), (8, 363)]),
        (13, &[(1, 7)]),
        (17, &[(1, 9)]),
        (19, &[(1, 10)]),
    ];
    for (p, row) in table {
        for (k, &(a, b)) in row.iter().enumerate() {
            let got = ratio_table(p, k as u32 + 1).map_err(|e| e.to_string())?;
            ensure(got == Rational64::new(a, b), || format!("g/f at {p}^{}: {got}", k + 1))?;
        }
    }
    Ok(())
}

fn hfpss_suite() -> Check {
    let window = Window { c: (-24, 24), d: (-24, 24), max_filtration: 16, exp_bound: None };
    let mut charts = Vec::new();
    for name in ["height1-laurent", "height2-laurent"] {
        let spec = RingSpec::preset(name).map_err(|e| e.to_string())?;
        let fast = compute_einfty(&spec, &window, Strategy::ClosedForm).map_err(|e| e.to_string())?;
        let slow = compute_einfty(&spec, &window, Strategy::PageByPage).map_err(|e| e.to_string())?;
        ensure(fast.first_difference(&slow).is_none(), || format!("{name}: strategies differ at {:?}", fast.first_difference(&slow)))?;
        ensure(is_strongly_even(&fast, -8..=8).map_err(|e| e.to_string())?, || format!("{name} not strongly even"))?;
        let fired = fired_pages(&spec, &window).map_err(|e| e.to_string())?;
        ensure(fired.iter().all(|&r| r < fast.collapse_page), || format!("{name}: differentials on pages {fired:?}"))?;
        charts.push((spec, fast));
    }
    let (_, h1) = &charts[0];
    ensure(h1.collapse_page == 4, || format!("height1 collapses at E_{}", h1.collapse_page))?;
    ensure(h1.max_filtration() <= Some(2), || format!("height1 filtration {:?}", h1.max_filtration()))?;
    let eta = h1.at(RO2Degree::new(1, 0));
    ensure(eta.len() == 1 && eta[0].filtration == 1 && eta[0].group == Group::Z2 && eta[0].multiplicity == 1, || {
        format!("height1 at degree 1: {eta:?}")
    })?;
    let (spec, h2) = &charts[1];
    ensure(h2.collapse_page == 8, || format!("height2 collapses at E_{}", h2.collapse_page))?;
    ensure(h2.max_filtration() <= Some(6), || format!("height2 filtration {:?}", h2.max_filtration()))?;
    let u4 = PageClass { w_bar: spec.parse_monomial("1").map_err(|e| e.to_string())?, s: 0, m: 4 };
    for e in 0..4 {
        let d = differential(spec, &u4, page_of(e)).map_err(|e| e.to_string())?;
        ensure(d.is_none(), || format!("d_{} of u^4 is nonzero", page_of(e)))?;
    }
    let period = u4.degree(spec);
    ensure(period == RO2Degree::new(8, -8), || format!("u^4 in degree {period}"))?;
    ensure(is_periodic(h2, period), || "height2 chart is not u^4-periodic".into())
}

fn anderson() -> Check {
    let t = S1Table::builtin();
    for (n, l) in DUALITY_ROWS {
        let s = anderson_symmetry_check(n, l, -30..=30, &t).map_err(|e| e.to_string())?;
        ensure(s == Symmetry::Holds, || format!("n={n} l={l}: {s:?}"))?;
    }
    for l in -30..=30 {
        let s = anderson_symmetry_check(9, l, -30..=30, &t).map_err(|e| e.to_string())?;
        ensure(matches!(s, Symmetry::Fails { .. }), || format!("n=9 l={l}: {s:?}"))?;
    }
    Ok(())
}

fn equivariant() -> Check {
    let labels = |orders: &[u64]| -> Result<Vec<String>, String> {
        let g = FiniteAbelian::from_orders(orders).map_err(|e| e.to_string())?;
        let mut v: Vec<String> = components(&g).map_err(|e| e.to_string())?.into_iter().map(|c| c.label).collect();
        v.sort();
        Ok(v)
    };
    let z6 = labels(&[6])?;
    ensure(z6 == ["M1(2)", "M1(3)", "M1(6)", "M_ell"], || format!("Z/6: {z6:?}"))?;
    let v4 = labels(&[2, 2])?;
    ensure(v4.len() == 5, || format!("(Z/2)^2: {v4:?}"))?;
    let bad = (1..=100u64).find(|&n| divisors(n).into_iter().map(dsum_f).sum::<u64>() != n * n);
    ensure(bad.is_none(), || format!("divisor degree sum fails at {bad:?}"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check); 8] = [
        ("duality scan to 200 gives the 12-row table", duality_table),
        ("Tmf_1(23) chart on stems -10..10", chart_23),
        ("degree equality search and the bound beyond 144", degree_search),
        ("splitting polynomials, rank identity, level 23 palindrome", splitting),
        ("ratio table g(p^k)/f(p^k)", ratios),
        ("C2 fixed point spectral sequence properties", hfpss_suite),
        ("Anderson rank symmetry", anderson),
        ("equivariant components and divisor degree sum", equivariant),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let ms = start.elapsed().as_millis();
        match result {
            Ok(()) => println!("criterion {}: PASS  {name} ({ms} ms)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
