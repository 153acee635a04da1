//! Command-line front end.
//!
//! Subcommands: `fixed-point`, `simulate`, `verify-tables`, `sweep`,
//! `smooth-compare`, `export`. Exit status 0 on success / all-pass, 1 on
//! validation failure, 2 on usage errors. All outputs are deterministic.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::analysis::{
    detect_period, reproduce_table, smoothing_sweep, PeriodVerdict,
};
use crate::coefficients::{ingest_params, CoefficientParams, SmoothingDelta};
use crate::error::Error;
use crate::exact::{integrate_exact, stroboscopic_samples, zeros_of};
use crate::history::HistoryFunction;
use crate::numeric::{integrate_numeric, stroboscopic_numeric, RhsSpec};
use crate::return_map::{
    type1_fixed_point, type1_map, type2_cycle, type2_map, type1_validity_window,
    type2_validity_window, validate_type1, validate_type2, FixedPointResult, MapVariant,
};
use crate::scenario::Scenario;
use crate::tables::TableId;
use crate::{fmt17, fmt6};

/// Marker for problems that are the caller's fault (exit status 2).
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
struct UsageError(String);

#[derive(Parser, Debug)]
#[command(
    name = "relay-dde",
    version,
    about = "Exact and numeric solvers with return-map analysis for periodically \
             forced relay-feedback delay differential equations"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Analytic return-map fixed point / two-cycle with shape checks
    FixedPoint(FixedPointArgs),
    /// Integrate a scenario and report zeros, samples and the period verdict
    Simulate(SimulateArgs),
    /// Recompute the built-in reference tables and confirm by simulation
    VerifyTables(VerifyTablesArgs),
    /// Classify a parameter grid point by point
    Sweep(SweepArgs),
    /// Compare smoothed stroboscopic limits against the sharp fixed point
    SmoothCompare(SmoothCompareArgs),
    /// Write coefficient profiles or return-map graphs for plotting
    Export(ExportArgs),
}

#[derive(Args, Debug)]
pub struct ParamArgs {
    /// Scenario file supplying the parameters
    #[arg(long, value_name = "FILE")]
    scenario: Option<PathBuf>,
    #[arg(long)]
    a1: Option<f64>,
    #[arg(long)]
    a2: Option<f64>,
    /// Signed third plateau value (normally negative)
    #[arg(long, allow_negative_numbers = true)]
    a3: Option<f64>,
    #[arg(long)]
    p1: Option<f64>,
    #[arg(long)]
    p2: Option<f64>,
    #[arg(long)]
    p3: Option<f64>,
}

impl ParamArgs {
    fn resolve(&self) -> anyhow::Result<CoefficientParams> {
        if let Some(path) = &self.scenario {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading scenario {}", path.display()))?;
            let (scenario, warnings) = Scenario::parse(&text)?;
            for w in warnings {
                eprintln!("warning: {w}");
            }
            return Ok(scenario.params);
        }
        match (self.a1, self.a2, self.a3, self.p1, self.p2, self.p3) {
            (Some(a1), Some(a2), Some(a3), Some(p1), Some(p2), Some(p3)) => {
                let ingested = ingest_params(a1, a2, a3, p1, p2, p3)?;
                if ingested.sign_warning {
                    eprintln!(
                        "warning: a3 is positive; the mixed-feedback regime expects a negative third plateau"
                    );
                }
                Ok(ingested.params)
            }
            _ => Err(UsageError(
                "pass either --scenario FILE or all of --a1 --a2 --a3 --p1 --p2 --p3".into(),
            )
            .into()),
        }
    }
}

#[derive(Copy, Clone, Debug, ValueEnum)]
pub enum VariantChoice {
    I,
    II,
    Both,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
pub enum VariantOnly {
    I,
    II,
}

impl From<VariantOnly> for MapVariant {
    fn from(v: VariantOnly) -> Self {
        match v {
            VariantOnly::I => MapVariant::TypeI,
            VariantOnly::II => MapVariant::TypeIIHalf,
        }
    }
}

#[derive(Args, Debug)]
pub struct FixedPointArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long, value_enum, default_value = "both")]
    variant: VariantChoice,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
pub enum SolverKind {
    Exact,
    Numeric,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    /// Scenario file (params, history, delta, mu, step, t_end)
    #[arg(long, value_name = "FILE")]
    scenario: PathBuf,
    #[arg(long, value_enum, default_value = "exact")]
    solver: SolverKind,
    /// Trajectory output file
    #[arg(long, value_name = "FILE")]
    output: PathBuf,
    /// Re-emit the parsed scenario in canonical form
    #[arg(long, value_name = "FILE")]
    dump_scenario: Option<PathBuf>,
    /// Down-sampling stride for numeric trajectory output
    #[arg(long, default_value_t = 1)]
    stride: usize,
    /// Residual tolerance for the period verdict
    /// (default 1e-9 exact, 1e-3 numeric)
    #[arg(long)]
    period_tol: Option<f64>,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
pub enum TableChoice {
    I,
    II,
    Both,
}

#[derive(Args, Debug)]
pub struct VerifyTablesArgs {
    #[arg(long, value_enum, default_value = "both")]
    which: TableChoice,
    /// Per-row results file
    #[arg(long, value_name = "FILE", default_value = "verify_tables.csv")]
    output: PathBuf,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    /// Fixed value or range start:stop:count
    #[arg(long)]
    a1: String,
    #[arg(long)]
    a2: String,
    /// Signed values, e.g. -0.1 or -2:-0.1:5
    #[arg(long, allow_negative_numbers = true, allow_hyphen_values = true)]
    a3: String,
    #[arg(long)]
    p1: String,
    #[arg(long)]
    p2: String,
    #[arg(long)]
    p3: String,
    #[arg(long, value_enum)]
    variant: VariantOnly,
    #[arg(long, value_name = "FILE")]
    output: PathBuf,
}

#[derive(Args, Debug)]
pub struct SmoothCompareArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long, value_enum)]
    variant: VariantOnly,
    /// Comma-separated smoothing widths, e.g. 0.1,0.01,0
    #[arg(long, value_delimiter = ',', required = true)]
    deltas: Vec<f64>,
    /// Grid step for every delta (default: 1/N with N = ceil(10/delta))
    #[arg(long)]
    step: Option<f64>,
    #[arg(long, value_name = "FILE")]
    output: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
pub enum ExportKind {
    /// Sharp and smoothed coefficient over one period: t,a_sharp,a_smoothed
    Coefficient,
    /// Analytic and measured one-period map: h,map_analytic,map_measured
    Map,
}

#[derive(Args, Debug)]
pub struct ExportArgs {
    #[arg(long, value_enum)]
    what: ExportKind,
    #[command(flatten)]
    params: ParamArgs,
    /// Smoothing width for the coefficient export
    #[arg(long, default_value_t = 0.0)]
    delta: f64,
    /// Sample count for the coefficient export
    #[arg(long, default_value_t = 512)]
    samples: usize,
    #[arg(long, value_enum, default_value = "i")]
    variant: VariantOnly,
    /// Range start:stop:count for the map export
    /// (default: interior of the validity window)
    #[arg(long, allow_negative_numbers = true, allow_hyphen_values = true)]
    grid: Option<String>,
    #[arg(long, value_name = "FILE")]
    output: PathBuf,
}

/// Dispatch and map errors onto the exit-status contract.
pub fn run(cli: Cli) -> i32 {
    let result = match cli.command {
        Command::FixedPoint(args) => cmd_fixed_point(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::VerifyTables(args) => cmd_verify_tables(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::SmoothCompare(args) => cmd_smooth_compare(args),
        Command::Export(args) => cmd_export(args),
    };
    match result {
        Ok(code) => code,
        Err(err) if err.downcast_ref::<UsageError>().is_some() => {
            eprintln!("usage error: {err}");
            2
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            1
        }
    }
}

fn print_fixed_point(variant: MapVariant, fp: &FixedPointResult) {
    println!(
        "variant {}: m = {}, b = {}",
        variant.as_str(),
        fmt6(fp.map.m),
        fmt6(fp.map.b)
    );
    println!(
        "  h* = {}  stability = {}  period = {}",
        fmt6(fp.h_star),
        fp.stability.as_str(),
        fmt6(fp.period)
    );
    for c in &fp.validity.checks {
        println!(
            "  check {:<36} [{}]  value {:>14}  {}",
            c.name,
            c.required,
            fmt6(c.value),
            if c.pass { "PASS" } else { "FAIL" }
        );
    }
    println!(
        "  validity: {}",
        if fp.validity.pass() { "PASS" } else { "FAIL" }
    );
}

fn cmd_fixed_point(args: FixedPointArgs) -> anyhow::Result<i32> {
    let params = args.params.resolve()?;
    let variants: &[MapVariant] = match args.variant {
        VariantChoice::I => &[MapVariant::TypeI],
        VariantChoice::II => &[MapVariant::TypeIIHalf],
        VariantChoice::Both => &[MapVariant::TypeI, MapVariant::TypeIIHalf],
    };
    let mut any_valid = false;
    for &variant in variants {
        let outcome = match variant {
            MapVariant::TypeI => type1_fixed_point(&params),
            MapVariant::TypeIIHalf => type2_cycle(&params),
        };
        match outcome {
            Ok(fp) => {
                print_fixed_point(variant, &fp);
                any_valid |= fp.validity.pass();
            }
            Err(Error::DegenerateMap) => {
                println!(
                    "variant {}: degenerate map (a1 = a2): |slope| = 1, no isolated fixed point",
                    variant.as_str()
                );
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok(if any_valid { 0 } else { 1 })
}

fn print_zeros(zeros: &[f64], degenerate: bool) {
    if degenerate {
        println!("zeros: none (identically zero solution)");
        return;
    }
    let shown: Vec<String> = zeros.iter().take(16).map(|z| fmt6(*z)).collect();
    let suffix = if zeros.len() > 16 {
        format!(" ... ({} total)", zeros.len())
    } else {
        String::new()
    };
    println!("zeros: [{}]{}", shown.join(", "), suffix);
}

fn print_verdict(samples: &[f64], verdict: &PeriodVerdict) {
    let shown: Vec<String> = samples.iter().take(12).map(|s| fmt6(*s)).collect();
    let suffix = if samples.len() > 12 {
        format!(" ... ({} total)", samples.len())
    } else {
        String::new()
    };
    println!("stroboscopic: [{}]{}", shown.join(", "), suffix);
    println!(
        "verdict: {} (residual {}, {} samples)",
        verdict.kind.as_str(),
        fmt6(verdict.residual),
        verdict.iterations_used
    );
}

fn cmd_simulate(args: SimulateArgs) -> anyhow::Result<i32> {
    let text = fs::read_to_string(&args.scenario)
        .with_context(|| format!("reading scenario {}", args.scenario.display()))?;
    let (scenario, warnings) = Scenario::parse(&text)?;
    for w in warnings {
        eprintln!("warning: {w}");
    }
    if let Some(path) = &args.dump_scenario {
        fs::write(path, scenario.to_file_string())
            .with_context(|| format!("writing {}", path.display()))?;
    }

    let period = scenario.params.period();
    let n_periods = (scenario.t_end / period + 1e-9).floor() as usize;
    let file = fs::File::create(&args.output)
        .with_context(|| format!("creating {}", args.output.display()))?;
    let mut out = BufWriter::new(file);

    match args.solver {
        SolverKind::Exact => {
            let (traj, events) = integrate_exact(&scenario.history, &scenario.params, scenario.t_end)?;
            traj.write_csv(&mut out)?;
            out.flush()?;
            println!(
                "exact trajectory: {} breakpoints on [0, {}], {} events -> {}",
                traj.breakpoints().len(),
                fmt6(scenario.t_end),
                events.len(),
                args.output.display()
            );
            let scan = zeros_of(&traj);
            print_zeros(&scan.zeros, scan.degenerate);
            if n_periods >= 3 {
                let samples = stroboscopic_samples(&traj, &scenario.params, n_periods)?;
                let tol = args.period_tol.unwrap_or(1e-9);
                let verdict = detect_period(&samples, tol);
                print_verdict(&samples, &verdict);
            } else {
                println!(
                    "stroboscopic: t_end covers only {n_periods} full periods; need 3 for a verdict"
                );
            }
        }
        SolverKind::Numeric => {
            let rhs = RhsSpec::new(scenario.mu, scenario.params, scenario.delta)?;
            let traj = integrate_numeric(&scenario.history, &rhs, scenario.step, scenario.t_end)?;
            traj.write_csv(&mut out, args.stride)?;
            out.flush()?;
            println!(
                "numeric trajectory: {} nodes at step {} -> {}",
                traj.values().len(),
                fmt6(traj.step()),
                args.output.display()
            );
            let zeros = traj.grid_zero_crossings();
            print_zeros(&zeros, zeros.is_empty() && scenario.history.is_zero());
            if n_periods >= 3 {
                match stroboscopic_numeric(&traj, period, n_periods) {
                    Ok(samples) => {
                        let tol = args.period_tol.unwrap_or(1e-3);
                        let verdict = detect_period(&samples, tol);
                        print_verdict(&samples, &verdict);
                    }
                    Err(e) => println!("stroboscopic unavailable: {e}"),
                }
            } else {
                println!(
                    "stroboscopic: t_end covers only {n_periods} full periods; need 3 for a verdict"
                );
            }
        }
    }
    Ok(0)
}

fn cmd_verify_tables(args: VerifyTablesArgs) -> anyhow::Result<i32> {
    let tables: &[TableId] = match args.which {
        TableChoice::I => &[TableId::I],
        TableChoice::II => &[TableId::II],
        TableChoice::Both => &[TableId::I, TableId::II],
    };
    let file = fs::File::create(&args.output)
        .with_context(|| format!("creating {}", args.output.display()))?;
    let mut out = BufWriter::new(file);
    writeln!(
        out,
        "table,row,a1,a2,a3_signed,p1,p2,p3,published_h,computed_h,abs_err,tolerance,validity,confirmation,confirmation_residual,pass"
    )?;

    let mut all_pass = true;
    let mut total = 0usize;
    let mut total_pass = 0usize;
    for &which in tables {
        let results = reproduce_table(which);
        let mut pass_count = 0usize;
        let mut worst_err = 0.0f64;
        let mut worst_row = 0usize;
        for (i, r) in results.iter().enumerate() {
            let pass = r.pass(which);
            pass_count += pass as usize;
            if r.abs_err > worst_err {
                worst_err = r.abs_err;
                worst_row = i + 1;
            }
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
                which.as_str(),
                i + 1,
                fmt17(r.row.a1),
                fmt17(r.row.a2),
                fmt17(r.row.a3_signed),
                fmt17(r.row.p1),
                fmt17(r.row.p2),
                fmt17(r.row.p3),
                fmt17(r.published_h),
                fmt17(r.computed_h),
                fmt17(r.abs_err),
                fmt17(r.tolerance),
                if r.validity.pass() { "pass" } else { "fail" },
                r.confirmation.kind.as_str(),
                fmt17(r.confirmation.residual),
                if pass { "pass" } else { "fail" }
            )?;
        }
        println!(
            "table {}: {}/{} rows pass; worst |computed - published| = {} (row {})",
            which.as_str(),
            pass_count,
            results.len(),
            fmt6(worst_err),
            worst_row
        );
        total += results.len();
        total_pass += pass_count;
        all_pass &= pass_count == results.len();
    }
    out.flush()?;
    println!(
        "overall: {total_pass}/{total} rows pass -> {}",
        args.output.display()
    );
    Ok(if all_pass { 0 } else { 1 })
}

/// Parse a fixed value or an inclusive range `start:stop:count`.
fn parse_range(name: &str, spec: &str) -> anyhow::Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let bad = |msg: String| -> anyhow::Error { UsageError(msg).into() };
    match parts.as_slice() {
        [single] => {
            let v = single
                .trim()
                .parse::<f64>()
                .map_err(|_| bad(format!("--{name}: cannot parse '{single}'")))?;
            Ok(vec![v])
        }
        [start, stop, count] => {
            let start = start
                .trim()
                .parse::<f64>()
                .map_err(|_| bad(format!("--{name}: cannot parse '{start}'")))?;
            let stop = stop
                .trim()
                .parse::<f64>()
                .map_err(|_| bad(format!("--{name}: cannot parse '{stop}'")))?;
            let count = count
                .trim()
                .parse::<usize>()
                .map_err(|_| bad(format!("--{name}: cannot parse count '{count}'")))?;
            if count == 0 {
                return Err(bad(format!("--{name}: empty grid (count 0)")));
            }
            if count == 1 {
                return Ok(vec![start]);
            }
            let h = (stop - start) / (count - 1) as f64;
            Ok((0..count).map(|i| start + i as f64 * h).collect())
        }
        _ => Err(bad(format!(
            "--{name}: expected a value or start:stop:count, got '{spec}'"
        ))),
    }
}

fn cmd_sweep(args: SweepArgs) -> anyhow::Result<i32> {
    let variant: MapVariant = args.variant.into();
    let g_a1 = parse_range("a1", &args.a1)?;
    let g_a2 = parse_range("a2", &args.a2)?;
    let g_a3 = parse_range("a3", &args.a3)?;
    let g_p1 = parse_range("p1", &args.p1)?;
    let g_p2 = parse_range("p2", &args.p2)?;
    let g_p3 = parse_range("p3", &args.p3)?;

    let file = fs::File::create(&args.output)
        .with_context(|| format!("creating {}", args.output.display()))?;
    let mut out = BufWriter::new(file);
    writeln!(out, "a1,a2,a3_signed,p1,p2,p3,classification,h_star,m,b")?;

    let mut counts: [(usize, &str); 5] = [
        (0, "stable-valid"),
        (0, "unstable"),
        (0, "invalid-shape"),
        (0, "degenerate"),
        (0, "invalid-params"),
    ];
    for &a1 in &g_a1 {
        for &a2 in &g_a2 {
            for &a3 in &g_a3 {
                for &p1 in &g_p1 {
                    for &p2 in &g_p2 {
                        for &p3 in &g_p3 {
                            let (class, fp) = classify_point(a1, a2, a3, p1, p2, p3, variant);
                            let slot = counts
                                .iter_mut()
                                .find(|(_, name)| *name == class)
                                .expect("known classification");
                            slot.0 += 1;
                            let (h_s, m_s, b_s) = match &fp {
                                Some(fp) => (
                                    fmt17(fp.h_star),
                                    fmt17(fp.map.m),
                                    fmt17(fp.map.b),
                                ),
                                None => ("nan".into(), "nan".into(), "nan".into()),
                            };
                            writeln!(
                                out,
                                "{},{},{},{},{},{},{},{},{},{}",
                                fmt17(a1),
                                fmt17(a2),
                                fmt17(a3),
                                fmt17(p1),
                                fmt17(p2),
                                fmt17(p3),
                                class,
                                h_s,
                                m_s,
                                b_s
                            )?;
                        }
                    }
                }
            }
        }
    }
    out.flush()?;
    let total: usize = counts.iter().map(|(n, _)| n).sum();
    let summary: Vec<String> = counts
        .iter()
        .filter(|(n, _)| *n > 0)
        .map(|(n, name)| format!("{name} {n}"))
        .collect();
    println!(
        "sweep: {total} points ({}) -> {}",
        summary.join(", "),
        args.output.display()
    );
    Ok(0)
}

fn classify_point(
    a1: f64,
    a2: f64,
    a3_signed: f64,
    p1: f64,
    p2: f64,
    p3: f64,
    variant: MapVariant,
) -> (&'static str, Option<FixedPointResult>) {
    let params = match ingest_params(a1, a2, a3_signed, p1, p2, p3) {
        Ok(ing) => ing.params,
        Err(_) => return ("invalid-params", None),
    };
    if params.a1() == params.a2() {
        return ("degenerate", None);
    }
    let fp = match variant {
        MapVariant::TypeI => type1_fixed_point(&params),
        MapVariant::TypeIIHalf => type2_cycle(&params),
    }
    .expect("a1 != a2 checked");
    let class = if fp.validity.pass() {
        if fp.map.m.abs() < 1.0 {
            "stable-valid"
        } else {
            "unstable"
        }
    } else {
        "invalid-shape"
    };
    (class, Some(fp))
}

fn cmd_smooth_compare(args: SmoothCompareArgs) -> anyhow::Result<i32> {
    let params = args.params.resolve()?;
    let variant: MapVariant = args.variant.into();
    let points = smoothing_sweep(&params, variant, &args.deltas, args.step)?;
    println!("variant {}: smoothing sweep", variant.as_str());
    for p in &points {
        println!(
            "  delta = {:<12}  h_hat = {:<14}  |h_hat - h*| = {}",
            fmt6(p.delta),
            fmt6(p.h_hat),
            fmt6(p.err)
        );
    }
    if let Some(path) = &args.output {
        let file =
            fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
        let mut out = BufWriter::new(file);
        writeln!(out, "delta,h_hat,err")?;
        for p in &points {
            writeln!(out, "{},{},{}", fmt17(p.delta), fmt17(p.h_hat), fmt17(p.err))?;
        }
        out.flush()?;
        println!("written -> {}", path.display());
    }
    Ok(0)
}

fn cmd_export(args: ExportArgs) -> anyhow::Result<i32> {
    let params = args.params.resolve()?;
    let file = fs::File::create(&args.output)
        .with_context(|| format!("creating {}", args.output.display()))?;
    let mut out = BufWriter::new(file);
    match args.what {
        ExportKind::Coefficient => {
            let delta = SmoothingDelta::new(args.delta)?;
            delta.check_ramp_windows(&params)?;
            if args.samples < 2 {
                return Err(UsageError("--samples must be at least 2".into()).into());
            }
            let period = params.period();
            writeln!(out, "t,a_sharp,a_smoothed")?;
            for k in 0..=args.samples {
                let t = period * k as f64 / args.samples as f64;
                writeln!(
                    out,
                    "{},{},{}",
                    fmt17(t),
                    fmt17(crate::coefficients::coefficient(&params, t)),
                    fmt17(crate::coefficients::coefficient_smoothed(&params, delta, t))
                )?;
            }
        }
        ExportKind::Map => {
            let variant: MapVariant = args.variant.into();
            let grid = match &args.grid {
                Some(spec) => parse_range("grid", spec)?,
                None => {
                    let window = match variant {
                        MapVariant::TypeI => type1_validity_window(&params),
                        MapVariant::TypeIIHalf => type2_validity_window(&params),
                    };
                    let (lo, hi) = window.ok_or_else(|| {
                        anyhow::anyhow!(
                            "no validity window for variant {}; pass --grid start:stop:count",
                            variant.as_str()
                        )
                    })?;
                    let width = hi - lo;
                    let (lo, hi) = (lo + 0.01 * width, hi - 0.01 * width);
                    let count = 33;
                    (0..count)
                        .map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64)
                        .collect()
                }
            };
            let map = match variant {
                MapVariant::TypeI => type1_map(&params),
                MapVariant::TypeIIHalf => type2_map(&params),
            };
            let period = params.period();
            writeln!(out, "h,map_analytic,map_measured")?;
            for &h in &grid {
                let analytic = match variant {
                    MapVariant::TypeI => map.m * h + map.b,
                    MapVariant::TypeIIHalf => map.m * h - map.b,
                };
                let valid = match variant {
                    MapVariant::TypeI => validate_type1(&params, h).pass(),
                    MapVariant::TypeIIHalf => validate_type2(&params, h).pass(),
                };
                let measured = if valid {
                    let hist = HistoryFunction::constant(h)?;
                    let (traj, _) = integrate_exact(&hist, &params, period)?;
                    fmt17(traj.eval(period))
                } else {
                    "nan".into()
                };
                writeln!(out, "{},{},{}", fmt17(h), fmt17(analytic), measured)?;
            }
        }
    }
    out.flush()?;
    println!("export -> {}", args.output.display());
    Ok(0)
}
