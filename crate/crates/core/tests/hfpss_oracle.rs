//! The closed-form survival rule against explicit page-by-page linear algebra.

use tmf_level::hfpss::ring::RingSpec;
use tmf_level::hfpss::{
    compute_einfty, fired_pages, is_strongly_even, transfer_check, v_chain_check, EinftyChart, Group, RO2Degree,
    Strategy, Window,
};
use tmf_level::Error;

fn ring(name: &str, gens: &[(&str, i64, bool)], v: &[&str], termination: &str) -> RingSpec {
    let gens: Vec<String> = gens
        .iter()
        .map(|(s, w, inv)| format!(r#"{{"sym":"{s}","weight":{w},"invertible":{inv}}}"#))
        .collect();
    let v: Vec<String> = v.iter().map(|x| format!("\"{x}\"")).collect();
    let json = format!(
        r#"{{"name":"{name}","base":"Z2loc","generators":[{}],"v":[{}],"termination":"{termination}"}}"#,
        gens.join(","),
        v.join(",")
    );
    RingSpec::from_json(&json).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn fixtures() -> Vec<RingSpec> {
    let mut out = RingSpec::presets();
    out.push(ring("degenerate", &[("a1", 1, false), ("a3", 3, false)], &["a1", "a1^3"], "in_ideal"));
    out.push(ring("extra-generator", &[("a1", 1, false), ("x2", 2, false), ("a3", 3, true)], &["a1", "a3"], "invertible"));
    out.push(ring("monomial-top", &[("a1", 1, false), ("x2", 2, false)], &["a1", "a1*x2"], "in_ideal"));
    out.push(ring("outside-top", &[("a1", 1, false), ("x2", 2, false), ("y1", 1, false)], &["a1", "y1*x2"], "in_ideal"));
    out.push(ring("zero-top", &[("a1", 1, false), ("a3", 3, false)], &["a1", "0"], "in_ideal"));
    out.push(ring("height0", &[("b", 1, false)], &["0"], "in_ideal"));
    out.push(ring(
        "height3",
        &[("a1", 1, false), ("a3", 3, false), ("a7", 7, true)],
        &["a1", "a3", "a7"],
        "invertible",
    ));
    out
}

fn agree(spec: &RingSpec, window: &Window) -> EinftyChart {
    let fast = compute_einfty(spec, window, Strategy::ClosedForm).unwrap();
    let slow = compute_einfty(spec, window, Strategy::PageByPage).unwrap();
    if let Some(x) = fast.first_difference(&slow) {
        panic!("{}: closed form {:?} but pages give {:?} at {x}", spec.name, fast.at(x), slow.at(x));
    }
    fast
}

#[test]
fn strategies_agree_on_fixtures() {
    let window = Window { c: (-10, 10), d: (-10, 10), max_filtration: 14, exp_bound: Some(3) };
    for spec in fixtures() {
        agree(&spec, &window);
    }
}

#[test]
fn strategies_agree_on_lopsided_windows() {
    let spec = RingSpec::preset("height2-laurent").unwrap();
    for window in [
        Window { c: (-3, 17), d: (-20, 1), max_filtration: 9, exp_bound: Some(3) },
        Window { c: (0, 0), d: (-30, 30), max_filtration: 16, exp_bound: None },
        Window { c: (5, 9), d: (5, 9), max_filtration: 0, exp_bound: Some(0) },
    ] {
        agree(&spec, &window);
    }
}

#[test]
fn collapse_and_vanishing_lines() {
    let window = Window { c: (-12, 12), d: (-12, 12), max_filtration: 20, exp_bound: Some(2) };
    for spec in fixtures() {
        let chart = agree(&spec, &window);
        let fired = fired_pages(&spec, &window).unwrap();
        assert!(fired.iter().all(|&r| r < spec.collapse_page()), "{}: {fired:?}", spec.name);
        if let Some(line) = spec.vanishing_line() {
            assert!(chart.max_filtration() <= Some(line), "{}: {:?}", spec.name, chart.max_filtration());
        }
    }
    let h3 = fixtures().into_iter().find(|s| s.name == "height3").unwrap();
    assert_eq!(h3.collapse_page(), 16);
    assert_eq!(h3.vanishing_line(), Some(14));
}

#[test]
fn a_multiplication_is_injective_above_the_line() {
    // On E_k, multiplication by a is injective on filtrations >= k - 1.
    let window = Window { c: (-10, 10), d: (-14, 10), max_filtration: 18, exp_bound: Some(3) };
    for spec in fixtures() {
        let chart = agree(&spec, &window);
        let k = chart.collapse_page;
        for cell in &chart.cells {
            for e in cell.classes.iter().filter(|e| e.filtration + 1 >= k && e.filtration > 0) {
                let next = cell.degree - RO2Degree::new(0, 1);
                if e.filtration + 1 > window.max_filtration || !window.contains(next) {
                    continue;
                }
                let above = chart.at(next).iter().find(|x| x.filtration == e.filtration + 1).map_or(0, |x| x.multiplicity);
                assert!(above >= e.multiplicity, "{} at {} s={}", spec.name, cell.degree, e.filtration);
            }
        }
    }
}

#[test]
fn integral_classes_sit_in_filtration_zero() {
    let window = Window { exp_bound: Some(3), ..Window::square(12, 12) };
    for spec in fixtures() {
        let chart = agree(&spec, &window);
        for cell in &chart.cells {
            for e in &cell.classes {
                assert_eq!(e.group == Group::Z2, e.filtration > 0, "{} at {}", spec.name, cell.degree);
            }
        }
    }
}

#[test]
fn strongly_even_presets() {
    let window = Window::square(12, 8);
    for name in ["height1-laurent", "height2-laurent", "height2-poly"] {
        let spec = RingSpec::preset(name).unwrap();
        let chart = compute_einfty(&spec, &window, Strategy::ClosedForm).unwrap();
        assert!(is_strongly_even(&chart, -6..=6).unwrap(), "{name}");
    }
    let chart = compute_einfty(&RingSpec::preset("height1-laurent").unwrap(), &Window::square(4, 4), Strategy::ClosedForm).unwrap();
    assert!(matches!(is_strongly_even(&chart, -8..=8), Err(Error::WindowTooSmall(_))));
}

#[test]
fn v_chain_rules_hold_on_fixtures() {
    for spec in fixtures() {
        let report = v_chain_check(&spec).unwrap();
        assert!(report.ok(), "{}: {report:?}", spec.name);
    }
}

#[test]
fn transfer_into_a_larger_ring() {
    let small = RingSpec::preset("height2-poly").unwrap();
    let big = fixtures().into_iter().find(|s| s.name == "height3").unwrap();
    let map = vec![("a1".to_string(), "a1".to_string()), ("a3".to_string(), "a3".to_string())];
    let levels = transfer_check(&small, &big, &map, 10).unwrap();
    assert!(levels.iter().all(|l| l.injective), "{levels:?}");
}

#[test]
fn malformed_rings_are_rejected() {
    let bad = [
        r#"{"name":"x","base":"Z2loc","generators":[{"sym":"a1","weight":1,"invertible":false}],"v":["a1"]}"#,
        r#"{"name":"x","base":"Z2loc","generators":[{"sym":"a1","weight":2,"invertible":false}],"v":["a1"],"termination":"in_ideal"}"#,
        r#"{"name":"x","base":"Z2loc","generators":[{"sym":"a1","weight":1,"invertible":false}],"v":["a1"],"termination":"invertible"}"#,
        r#"{"name":"x","base":"Z2loc","generators":[{"sym":"a1","weight":1,"invertible":true},{"sym":"a3","weight":3,"invertible":false}],"v":["a1","a3"],"termination":"in_ideal"}"#,
        r#"{"name":"x","base":"Q","generators":[{"sym":"a1","weight":1,"invertible":false}],"v":["a1"],"termination":"in_ideal"}"#,
    ];
    for text in bad {
        assert!(RingSpec::from_json(text).is_err(), "{text}");
    }
    let missing = RingSpec::from_json(bad[0]).unwrap_err();
    assert!(matches!(missing, Error::NonTerminating(_)));
}
