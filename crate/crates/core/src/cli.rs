//! Command line front end: `tmf-level <subcommand>`.
//!
//! Output is JSON carrying `"version": 1` unless a human format is requested;
//! charts keep their fixed schema. Exit codes: 0 success, 1 domain error, 2 usage error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::charts::{self, dss_chart, Format};
use crate::cohomology::{s1, S1Table, S1Value};
use crate::duality::{hom_dual_shift, scan, verdict, DualityVerdict};
use crate::equivariant::{component_summary, components, cyclic_full_split, FiniteAbelian};
use crate::hfpss::ring::{RingSpec, PRESET_NAMES};
use crate::hfpss::{compute_einfty, EinftyChart, Strategy, Window};
use crate::levels::{curve_invariants, is_squarefree, is_tame, LevelSpec, MAX_LEVEL};
use crate::splitting::{profile_mod, rational_multiplicities, rho_decorate, shift_polynomial, torsion_condition, Base, Torsion};
use crate::{Error, Result};

pub const JSON_VERSION: u64 = 1;

#[derive(Debug, Parser)]
#[command(name = "tmf-level", version, about = "Exact computations for topological modular forms with level structure")]
struct Cli {
    /// CSV file with columns `n,s1` overriding the builtin weight-1 cusp form table.
    #[arg(long, global = true, value_name = "PATH")]
    s1_file: Option<PathBuf>,
    /// Worker threads for scans and page computations.
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Degree, cusps, genus and stack data of `X_1(n)`.
    Invariants(InvariantsArgs),
    /// Descent spectral sequence chart of `Tmf_1(n)`.
    Chart(ChartArgs),
    /// Shift multiplicities of a module splitting of `Tmf_1(n)`.
    Split(SplitArgs),
    /// Anderson self-duality of `Tmf_1(n)`.
    Duality(DualityArgs),
    /// `E_infinity` of a regular `C_2` homotopy fixed point spectral sequence.
    Hfpss(HfpssArgs),
    /// Components of `TMF^G` for a finite abelian group `G`.
    Equivariant(EquivariantArgs),
}

#[derive(Debug, Args)]
struct InvariantsArgs {
    #[arg(long)]
    n: u64,
    /// Also report tameness of `Gamma_1(n)` at this prime.
    #[arg(long)]
    prime: Option<u64>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ChartFormat {
    Json,
    Ascii,
    Svg,
}

#[derive(Debug, Args)]
struct ChartArgs {
    #[arg(long)]
    n: u64,
    /// Stem range `A..B`, inclusive.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_range, default_value = "-10..10")]
    range: (i64, i64),
    #[arg(long, value_enum, default_value = "json")]
    format: ChartFormat,
}

#[derive(Debug, Args)]
struct SplitArgs {
    #[arg(long)]
    n: u64,
    /// `2`, `3`, another prime, or `0` for the rational splitting.
    #[arg(long)]
    prime: u64,
    /// Report `Sigma^{k rho}` shifts of the `C_2`-equivariant refinement.
    #[arg(long)]
    rho: bool,
    /// Sum multiplicities over residues of the shift modulo `M`.
    #[arg(long = "mod", value_name = "M")]
    modulus: Option<usize>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TableFormat {
    Json,
    Table,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("target").required(true)))]
struct DualityArgs {
    #[arg(long, group = "target")]
    n: Option<u64>,
    /// Classify every level `1..=MAX`.
    #[arg(long, value_name = "MAX", group = "target")]
    scan: Option<u64>,
    /// Shifts of the dual of `Tmf_1(3)` over `Tmf`.
    #[arg(long, group = "target")]
    hom_dual: bool,
    #[arg(long, value_enum, default_value = "json")]
    format: TableFormat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StrategyArg {
    Both,
    Fast,
    Reference,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum HfpssFormat {
    Json,
    Ascii,
}

#[derive(Debug, Args)]
struct HfpssArgs {
    /// Ring specification file, or one of the presets.
    #[arg(long, value_name = "FILE|PRESET")]
    ring: String,
    /// Window `|c| <= C`, `|d| <= D`, filtration `<= F`.
    #[arg(long, num_args = 3, value_names = ["C", "D", "F"], default_values = ["8", "8", "8"])]
    window: Vec<u32>,
    /// Bound on exponents of invertible generators.
    #[arg(long)]
    exp_bound: Option<i64>,
    #[arg(long, value_enum, default_value = "fast")]
    strategy: StrategyArg,
    #[arg(long, value_enum, default_value = "json")]
    format: HfpssFormat,
}

#[derive(Debug, Args)]
struct EquivariantArgs {
    /// Cyclic factor orders `n1,n2,...`; empty for the trivial group.
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    group: Vec<u64>,
    /// For cyclic groups, split each component at this prime (`0` rationally).
    #[arg(long)]
    prime: Option<u64>,
}

fn parse_range(s: &str) -> std::result::Result<(i64, i64), String> {
    let (a, b) = s.split_once("..").ok_or_else(|| format!("expected A..B, got `{s}`"))?;
    let a: i64 = a.trim().parse().map_err(|e| format!("bad range start: {e}"))?;
    let b: i64 = b.trim().parse().map_err(|e| format!("bad range end: {e}"))?;
    if a > b {
        return Err(format!("empty range {a}..{b}"));
    }
    Ok((a, b))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs the command line `argv` (including the program name).
pub fn dispatch<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let code = if e.use_stderr() { 2 } else { 0 };
            let (stdout, stderr) = if code == 0 { (text, String::new()) } else { (String::new(), text) };
            return Outcome { code, stdout, stderr };
        }
    };
    let mut stderr = String::new();
    let result = load_table(&cli, &mut stderr).and_then(|table| with_jobs(cli.jobs, || run(&cli.command, &table, &mut stderr)));
    match result {
        Ok(stdout) => Outcome { code: 0, stdout, stderr },
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            Outcome { code: 1, stdout: String::new(), stderr }
        }
    }
}

fn load_table(cli: &Cli, stderr: &mut String) -> Result<S1Table> {
    let (table, warnings) = S1Table::load(cli.s1_file.as_deref())?;
    for w in warnings {
        let _ = writeln!(stderr, "warning: {w}");
    }
    Ok(table)
}

fn with_jobs<R: Send>(jobs: Option<usize>, f: impl FnOnce() -> Result<R> + Send) -> Result<R> {
    match jobs {
        None => f(),
        Some(0) => Err(Error::Precondition("--jobs must be positive".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Internal(e.to_string()))?
            .install(f),
    }
}

fn run(cmd: &Command, table: &S1Table, stderr: &mut String) -> Result<String> {
    match cmd {
        Command::Invariants(a) => invariants(a, table),
        Command::Chart(a) => chart(a, table),
        Command::Split(a) => split(a, table),
        Command::Duality(a) => duality(a, table, stderr),
        Command::Hfpss(a) => hfpss(a),
        Command::Equivariant(a) => equivariant(a, table),
    }
}

fn to_json(v: Value) -> String {
    let mut s = serde_json::to_string_pretty(&v).expect("json values serialize");
    s.push('\n');
    s
}

fn s1_json(v: S1Value) -> Value {
    match v {
        S1Value::Known(k) => json!(k),
        S1Value::NotOne => json!("not_one"),
        S1Value::Unknown => Value::Null,
    }
}

fn invariants(a: &InvariantsArgs, table: &S1Table) -> Result<String> {
    if a.n > MAX_LEVEL {
        return Err(Error::LevelTooLarge { n: a.n, max: MAX_LEVEL });
    }
    let inv = curve_invariants(a.n)?;
    let mut out = json!({
        "version": JSON_VERSION,
        "n": a.n,
        "d_n": inv.d_n,
        "deg_omega": inv.deg_omega().to_string(),
        "cusps": inv.cusps().to_string(),
        "squarefree": is_squarefree(a.n),
        "s1": s1_json(s1(a.n, table)),
    });
    match (inv.curve(), inv.stacky()) {
        (Some(c), _) => {
            out["geometry"] = json!("curve");
            out["genus"] = json!(c.genus);
        }
        (_, Some(s)) => {
            out["geometry"] = json!("stacky");
            out["weights"] = json!([s.weights.0, s.weights.1]);
        }
        _ => unreachable!("geometry is either a curve or a weighted projective stack"),
    }
    if let Some(l) = a.prime {
        out["prime"] = json!(l);
        out["tame"] = json!(is_tame(&LevelSpec::gamma1(a.n)?, l)?);
    }
    Ok(to_json(out))
}

fn chart(a: &ChartArgs, table: &S1Table) -> Result<String> {
    let c = dss_chart(a.n, a.range.0..=a.range.1, table)?;
    let format = match a.format {
        ChartFormat::Json => Format::Json,
        ChartFormat::Ascii => Format::Ascii,
        ChartFormat::Svg => Format::Svg,
    };
    Ok(charts::render(&c, format))
}

fn split(a: &SplitArgs, table: &S1Table) -> Result<String> {
    let base = Base::for_prime(a.prime)?;
    let q = shift_polynomial(a.n, base, table)?;
    let torsion = if a.prime == 0 { Torsion::Holds } else { torsion_condition(a.n, a.prime, table)? };
    let coeffs: serde_json::Map<String, Value> = q.coeffs().into_iter().map(|(j, c)| (j.to_string(), json!(c))).collect();
    let mut out = json!({
        "version": JSON_VERSION,
        "n": a.n,
        "prime": a.prime,
        "base": base,
        "polynomial": q.q.to_string(),
        "coeffs": coeffs,
        "torsion": torsion,
        "rank_check": q.total_rank(),
    });
    if base == Base::Rational {
        out["symmetry"] = serde_json::to_value(rational_multiplicities(a.n, table)?.symmetry).expect("serializes");
    }
    if a.rho {
        let shifts: Vec<Value> = rho_decorate(&q)?
            .into_iter()
            .map(|(k, mult)| json!({"shift": format!("{k}rho"), "multiplicity": mult}))
            .collect();
        out["rho_shifts"] = json!(shifts);
    }
    if let Some(m) = a.modulus {
        let (sums, uniform) = profile_mod(&q, m)?;
        out["profile"] = json!({"modulus": m, "sums": sums, "uniform": uniform});
    }
    Ok(to_json(out))
}

fn verdict_json(v: &DualityVerdict) -> Value {
    json!({
        "n": v.n,
        "twist": v.twist,
        "self_dual": v.self_dual,
        "shift_l": v.shift_l,
        "c2_shift": v.c2_shift.map(|x| x.to_string()),
        "reason": v.reason,
    })
}

/// `n = 23 with l= -1`.
fn table_row(v: &DualityVerdict) -> String {
    let l = v.shift_l.map_or_else(|| "none".to_string(), |l| l.to_string());
    let mut row = format!("n = {} with l= {}", v.n, l);
    if let Some(c2) = v.c2_shift {
        let _ = write!(row, "  C2: {c2}");
    }
    row
}

fn duality(a: &DualityArgs, table: &S1Table, stderr: &mut String) -> Result<String> {
    if a.hom_dual {
        let h = hom_dual_shift();
        return Ok(match a.format {
            TableFormat::Json => to_json(json!({
                "version": JSON_VERSION,
                "compactified": h.compactified.to_string(),
                "periodic": h.periodic.to_string(),
            })),
            TableFormat::Table => format!("compactified: {}\nperiodic: {}\n", h.compactified, h.periodic),
        });
    }
    if let Some(n) = a.n {
        if n > MAX_LEVEL {
            return Err(Error::LevelTooLarge { n, max: MAX_LEVEL });
        }
        let v = verdict(n, table)?;
        return Ok(match a.format {
            TableFormat::Json => {
                let mut out = verdict_json(&v);
                out["version"] = json!(JSON_VERSION);
                to_json(out)
            }
            TableFormat::Table => format!("{}\n", table_row(&v)),
        });
    }
    let max = a.scan.expect("clap requires one target");
    if max > MAX_LEVEL {
        return Err(Error::LevelTooLarge { n: max, max: MAX_LEVEL });
    }
    let s = scan(max, table)?;
    if !s.unknown.is_empty() {
        let _ = writeln!(stderr, "warning: undecided for lack of s1 data: {:?}", s.unknown);
    }
    Ok(match a.format {
        TableFormat::Json => to_json(json!({
            "version": JSON_VERSION,
            "max": s.max,
            "rows": s.rows.iter().map(verdict_json).collect::<Vec<_>>(),
            "unknown": s.unknown,
        })),
        TableFormat::Table => s.rows.iter().map(|v| table_row(v) + "\n").collect(),
    })
}

fn load_ring(arg: &str) -> Result<RingSpec> {
    if PRESET_NAMES.contains(&arg) {
        return RingSpec::preset(arg);
    }
    let text = std::fs::read_to_string(arg).map_err(|e| {
        Error::Io(format!("`{arg}` is neither a preset ({}) nor a readable file: {e}", PRESET_NAMES.join(", ")))
    })?;
    RingSpec::from_json(&text)
}

fn chart_json(chart: &EinftyChart) -> Value {
    let cells: Vec<Value> = chart
        .cells
        .iter()
        .map(|cell| {
            json!({
                "c": cell.degree.c,
                "d": cell.degree.d,
                "degree": cell.degree.to_string(),
                "classes": cell.classes,
            })
        })
        .collect();
    json!({
        "ring": chart.ring,
        "window": chart.window,
        "exp_bound": chart.exp_bound,
        "collapse_page": chart.collapse_page,
        "cells": cells,
    })
}

fn chart_ascii(chart: &EinftyChart) -> String {
    let mut out = format!(
        "E_infinity of {} on c in {}..{}, d in {}..{}, s <= {}, collapse at E_{}\n",
        chart.ring, chart.window.c.0, chart.window.c.1, chart.window.d.0, chart.window.d.1, chart.window.max_filtration, chart.collapse_page
    );
    for cell in &chart.cells {
        let classes: Vec<String> = cell
            .classes
            .iter()
            .map(|e| {
                let g = serde_json::to_value(e.group).expect("serializes");
                let g = g.as_str().unwrap_or_default().to_string();
                if e.multiplicity == 1 {
                    format!("s={}:{g}", e.filtration)
                } else {
                    format!("s={}:{g}^{}", e.filtration, e.multiplicity)
                }
            })
            .collect();
        let _ = writeln!(out, "{:>4} {:>4}  {:<10} {}", cell.degree.c, cell.degree.d, cell.degree.to_string(), classes.join(" "));
    }
    out
}

fn hfpss(a: &HfpssArgs) -> Result<String> {
    let spec = load_ring(&a.ring)?;
    let [c, d, f] = a.window[..] else {
        return Err(Error::Precondition("--window takes exactly three values".into()));
    };
    let (c, d) = (i64::from(c), i64::from(d));
    let window = Window { c: (-c, c), d: (-d, d), max_filtration: f, exp_bound: a.exp_bound };
    let primary = match a.strategy {
        StrategyArg::Reference => Strategy::PageByPage,
        _ => Strategy::ClosedForm,
    };
    let chart = compute_einfty(&spec, &window, primary)?;
    let mut agree = None;
    if a.strategy == StrategyArg::Both {
        let reference = compute_einfty(&spec, &window, Strategy::PageByPage)?;
        if let Some(x) = chart.first_difference(&reference) {
            return Err(Error::Internal(format!("closed form and page-by-page disagree at {x}")));
        }
        agree = Some(true);
    }
    Ok(match a.format {
        HfpssFormat::Json => {
            let mut out = chart_json(&chart);
            out["version"] = json!(JSON_VERSION);
            out["strategy"] = json!(primary);
            out["vanishing_line"] = json!(spec.vanishing_line());
            if let Some(ok) = agree {
                out["strategies_agree"] = json!(ok);
            }
            to_json(out)
        }
        HfpssFormat::Ascii => chart_ascii(&chart),
    })
}

fn equivariant(a: &EquivariantArgs, table: &S1Table) -> Result<String> {
    let g = FiniteAbelian::from_orders(&a.group)?;
    let comps = components(&g)?;
    let list: Vec<Value> = comps
        .iter()
        .map(|c| {
            json!({
                "label": c.label,
                "quotient": c.quotient,
                "subgroup_order": c.subgroup.order,
                "subgroup_generators": c.subgroup.generators,
                "multiplicity": c.multiplicity,
            })
        })
        .collect();
    let summary: Vec<Value> =
        component_summary(&comps).into_iter().map(|(label, k)| json!({"label": label, "multiplicity": k})).collect();
    let mut out = json!({
        "version": JSON_VERSION,
        "group": g.factors,
        "order": g.order(),
        "components": list,
        "summary": summary,
    });
    if let Some(l) = a.prime {
        let n = match g.factors[..] {
            [] => 1,
            [n] => n,
            _ => return Err(Error::Precondition("--prime needs a cyclic group".into())),
        };
        let split = cyclic_full_split(n, l, table)?;
        let pieces: Vec<Value> = split
            .pieces
            .iter()
            .map(|p| {
                json!({
                    "k": p.k,
                    "polynomial": p.shifts.q.to_string(),
                    "rank": p.shifts.total_rank(),
                    "torsion": p.torsion,
                })
            })
            .collect();
        out["splitting"] = json!({
            "prime": l,
            "base": split.base,
            "unit": split.unit,
            "pieces": pieces,
            "total_rank": split.total_rank(),
        });
    }
    Ok(to_json(out))
}
