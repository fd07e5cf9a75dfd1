//! Command-line front end.
//!
//! Exit codes: 0 ok, 1 property violation, 2 bad input, 3 convergence
//! failure, 4 resource limit.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use crate::carpet::{
    h_from_bernoulli, CarpetDescription, CarpetSpec, DimParams, ProbVector, TargetKind,
};
use crate::error::{Error, Result};
use crate::frontier::Frontier;
use crate::optimizer::{brute_force, maximize, sweep, MaximizeOptions, OptResult};
use crate::symdyn::counting::{count_entropy_bounded, count_rowentropy_above, types_bound};
use crate::symdyn::measure::{mean_local_dimensions, scale_table};
use crate::validate_carpet;

pub const EXIT_OK: i32 = 0;
pub const EXIT_PROPERTY: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_CONVERGENCE: i32 = 3;
pub const EXIT_RESOURCE: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "shrinking-carpet", version, about = "Dimension of shrinking-target sets on Bedford-McMullen carpets")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// DIM(alpha, H), its maximizer and the six dimension functions.
    Dim(DimArgs),
    /// DIM over a range of alpha, as CSV.
    Sweep(SweepArgs),
    /// Lattice brute force against the optimizer.
    Oracle(OracleArgs),
    /// Scale table and local-dimension curve of the heuristic measure.
    Simulate(SimulateArgs),
    /// Exact type-class counts against the method-of-types bound.
    Count(CountArgs),
    /// Samples of the entropy frontier psi, as CSV.
    Frontier(FrontierArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum TargetArg {
    Cylinder,
    Ball,
}

impl From<TargetArg> for TargetKind {
    fn from(t: TargetArg) -> Self {
        match t {
            TargetArg::Cylinder => TargetKind::Cylinder,
            TargetArg::Ball => TargetKind::Ball,
        }
    }
}

#[derive(Debug, Args)]
pub struct CarpetArgs {
    /// Carpet file: {"N":3,"M":8,"rows":[{"column":1,"fibers":[1,2,3,4,5]}, ...]}
    #[arg(long)]
    pub carpet: Option<PathBuf>,
    /// The carpet N = 3, M = 8, T = (5, 2, 8) with ball targets and H = 0.8.
    #[arg(long)]
    pub figure5: bool,
}

#[derive(Debug, Args)]
pub struct TargetArgs {
    #[arg(long, value_enum)]
    pub target: Option<TargetArg>,
    /// Row average of log T_a along the targets (ball targets).
    #[arg(long = "H", allow_negative_numbers = true)]
    pub h: Option<f64>,
    /// Bernoulli measure file whose H = sum nu_a log T_a is used.
    #[arg(long = "H-from-bernoulli")]
    pub h_from_bernoulli: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DimArgs {
    #[command(flatten)]
    pub carpet: CarpetArgs,
    #[command(flatten)]
    pub target: TargetArgs,
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: f64,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub carpet: CarpetArgs,
    #[command(flatten)]
    pub target: TargetArgs,
    #[arg(long, allow_negative_numbers = true)]
    pub alpha_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub alpha_max: Option<f64>,
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub carpet: CarpetArgs,
    #[command(flatten)]
    pub target: TargetArgs,
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: f64,
    /// Lattice denominator K.
    #[arg(long, default_value_t = 30)]
    pub resolution: u32,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub carpet: CarpetArgs,
    #[command(flatten)]
    pub target: TargetArgs,
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: f64,
    /// Depth n of the heuristic measure.
    #[arg(long, default_value_t = 10_000)]
    pub n: usize,
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Scale-table CSV.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Local-dimension curve CSV.
    #[arg(long)]
    pub curve_out: Option<PathBuf>,
    /// Curve points between 1 and the largest scale.
    #[arg(long, default_value_t = 60)]
    pub curve_points: usize,
}

#[derive(Debug, Args)]
pub struct CountArgs {
    #[command(flatten)]
    pub carpet: CarpetArgs,
    /// Word length.
    #[arg(long)]
    pub n: usize,
    /// Entropy threshold for the entropy-bounded count.
    #[arg(long)]
    pub h: f64,
    /// Row-entropy threshold for the row-entropy count.
    #[arg(long)]
    pub z: Option<f64>,
}

#[derive(Debug, Args)]
pub struct FrontierArgs {
    #[command(flatten)]
    pub carpet: CarpetArgs,
    #[arg(long, default_value_t = 101)]
    pub points: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// `%.9g`-style formatting.
pub fn fmt9(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let e = x.abs().log10().floor() as i32;
    if (-5..9).contains(&e) {
        let s = format!("{:.*}", (8 - e).max(0) as usize, x);
        let rounded: f64 = s.parse().unwrap_or(x);
        // rounding may carry into a new digit, e.g. 9.999999999 -> 10.0000000
        let s = if rounded != 0.0 && rounded.abs().log10().floor() as i32 != e {
            format!("{:.*}", (7 - e).max(0) as usize, x)
        } else {
            s
        };
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        let s = format!("{:.8e}", x);
        let (mant, exp) = s.split_once('e').expect("scientific");
        let mant = mant.trim_end_matches('0').trim_end_matches('.');
        format!("{mant}e{exp}")
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::ConvergenceFailure(_) => EXIT_CONVERGENCE,
        Error::ResourceLimit(_) => EXIT_RESOURCE,
        Error::PropertyViolation(_) | Error::CertificationFailure { .. } => EXIT_PROPERTY,
        _ => EXIT_INPUT,
    }
}

fn read_file(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidParams(format!("cannot read {}: {e}", path.display())))
}

fn write_output(path: &Option<PathBuf>, text: &str, out: &mut String) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| Error::InvalidParams(format!("cannot write {}: {e}", p.display()))),
        None => {
            out.push_str(text);
            Ok(())
        }
    }
}

fn load_carpet(args: &CarpetArgs) -> Result<CarpetSpec> {
    match (&args.carpet, args.figure5) {
        (Some(path), _) => validate_carpet(&CarpetDescription::from_json(&read_file(path)?)?),
        (None, true) => Ok(CarpetSpec::figure5()),
        (None, false) => Err(Error::InvalidParams("--carpet or --figure5 is required".into())),
    }
}

#[derive(Debug, Deserialize)]
struct BernoulliRow {
    column: u32,
    weights: Vec<f64>,
}

#[derive(Debug, Deserialize)]
struct BernoulliFile {
    rows: Vec<BernoulliRow>,
}

/// Reads `{"rows":[{"column":a,"weights":[...]}, ...]}`, weights listed in fiber order.
pub fn parse_bernoulli(spec: &CarpetSpec, text: &str) -> Result<ProbVector> {
    let file: BernoulliFile =
        serde_json::from_str(text).map_err(|e| Error::InvalidProbVector(e.to_string()))?;
    let mut weights = vec![0.0; spec.d()];
    for row in &file.rows {
        let pos = spec.column_position(row.column).ok_or_else(|| {
            Error::InvalidProbVector(format!("column {} is not in S", row.column))
        })?;
        let range = spec.column_range(pos);
        if row.weights.len() != range.len() {
            return Err(Error::InvalidProbVector(format!(
                "column {} has {} fibers, got {} weights",
                row.column,
                range.len(),
                row.weights.len()
            )));
        }
        weights[range].copy_from_slice(&row.weights);
    }
    ProbVector::new(spec, weights)
}

fn load_params(spec: &CarpetSpec, args: &TargetArgs, figure5: bool, alpha: f64) -> Result<DimParams> {
    let target = match (args.target, figure5) {
        (Some(t), _) => t.into(),
        (None, true) => TargetKind::Ball,
        (None, false) => TargetKind::Cylinder,
    };
    let h = match (&args.h, &args.h_from_bernoulli) {
        (Some(h), None) => Some(*h),
        (None, Some(path)) => Some(h_from_bernoulli(spec, &parse_bernoulli(spec, &read_file(path)?)?)),
        (Some(_), Some(_)) => {
            return Err(Error::InvalidParams("give either --H or --H-from-bernoulli".into()))
        }
        (None, None) => figure5.then_some(0.8),
    };
    match target {
        TargetKind::Cylinder => DimParams::cylinder(alpha),
        TargetKind::Ball => {
            let h = h.ok_or_else(|| Error::InvalidParams("ball targets need --H".into()))?;
            DimParams::ball(spec, alpha, h)
        }
    }
}

fn theta_line(r: &OptResult) -> String {
    let t = r.argmax;
    format!(
        "argmax (z_minus, z1, z2, z_plus) = ({}, {}, {}, {})",
        fmt9(t.z_minus),
        fmt9(t.z1),
        fmt9(t.z2),
        fmt9(t.z_plus)
    )
}

fn cmd_dim(args: &DimArgs, out: &mut String) -> Result<i32> {
    let spec = load_carpet(&args.carpet)?;
    let params = load_params(&spec, &args.target, args.carpet.figure5, args.alpha)?;
    let r = maximize(&spec, &params, &MaximizeOptions::default())?;
    let _ = writeln!(out, "DIM = {}", fmt9(r.value));
    let _ = writeln!(out, "{}", theta_line(&r));
    for (i, d) in r.breakdown.d.iter().enumerate() {
        let _ = writeln!(out, "d{} = {}", i + 1, fmt9(*d));
    }
    let _ = writeln!(out, "active = {}", r.breakdown.active_label());
    Ok(EXIT_OK)
}

/// Alpha grid of a sweep: `steps` evenly spaced points from `lo` to `hi`.
pub fn alpha_grid(lo: f64, hi: f64, steps: usize) -> Result<Vec<f64>> {
    if steps < 2 || !(hi > lo) {
        return Err(Error::InvalidParams(format!(
            "sweep needs alpha_min < alpha_max and at least 2 steps (got [{lo}, {hi}], {steps})"
        )));
    }
    Ok((0..steps)
        .map(|k| lo + (hi - lo) * k as f64 / (steps - 1) as f64)
        .collect())
}

/// The sweep CSV: `alpha,dim,d1,...,d6,active_set`.
pub fn sweep_csv(alphas: &[f64], results: &[OptResult]) -> String {
    let mut s = String::from("alpha,dim,d1,d2,d3,d4,d5,d6,active_set\n");
    for (a, r) in alphas.iter().zip(results) {
        let _ = write!(s, "{},{}", fmt9(*a), fmt9(r.value));
        for d in &r.breakdown.d {
            let _ = write!(s, ",{}", fmt9(*d));
        }
        let _ = writeln!(s, ",{}", r.breakdown.active_label());
    }
    s
}

fn cmd_sweep(args: &SweepArgs, out: &mut String) -> Result<i32> {
    let spec = load_carpet(&args.carpet)?;
    let f5 = args.carpet.figure5;
    let lo = args.alpha_min.unwrap_or(0.0);
    let hi = args
        .alpha_max
        .or(f5.then_some(6.0))
        .ok_or_else(|| Error::InvalidParams("--alpha-max is required".into()))?;
    let steps = args
        .steps
        .or(f5.then_some(600))
        .ok_or_else(|| Error::InvalidParams("--steps is required".into()))?;
    let alphas = alpha_grid(lo, hi, steps)?;
    let params = load_params(&spec, &args.target, f5, lo)?;
    let results = sweep(&spec, &params, &alphas, &MaximizeOptions::default())?;
    write_output(&args.out, &sweep_csv(&alphas, &results), out)?;
    Ok(EXIT_OK)
}

fn cmd_oracle(args: &OracleArgs, out: &mut String) -> Result<i32> {
    let spec = load_carpet(&args.carpet)?;
    let params = load_params(&spec, &args.target, args.carpet.figure5, args.alpha)?;
    let brute = brute_force(&spec, &params, args.resolution)?;
    let opt = maximize(&spec, &params, &MaximizeOptions::default())?;
    let gap = opt.value - brute;
    let tol = 1.0 / args.resolution as f64;
    let ok = gap >= -1e-9 && gap <= tol;
    let _ = writeln!(out, "brute_force = {}", fmt9(brute));
    let _ = writeln!(out, "maximize = {}", fmt9(opt.value));
    let _ = writeln!(out, "gap = {}", fmt9(gap));
    let _ = writeln!(out, "tolerance = {}", fmt9(tol));
    let _ = writeln!(out, "{}", if ok { "PASS" } else { "FAIL" });
    Ok(if ok { EXIT_OK } else { EXIT_PROPERTY })
}

fn cmd_simulate(args: &SimulateArgs, out: &mut String) -> Result<i32> {
    let spec = load_carpet(&args.carpet)?;
    let params = load_params(&spec, &args.target, args.carpet.figure5, args.alpha)?;
    let opt = maximize(&spec, &params, &MaximizeOptions::default())?;
    let table = scale_table(&spec, &params, &opt.vectors, args.n, args.samples, args.seed)?;
    let mut csv = String::from("i,m,predicted,simulated\n");
    for row in &table.rows {
        let _ = writeln!(
            csv,
            "{},{},{},{}",
            row.index,
            row.m,
            fmt9(row.predicted),
            fmt9(row.simulated)
        );
    }
    write_output(&args.out, &csv, out)?;
    if let Some(path) = &args.curve_out {
        let top = table.rows.iter().map(|r| r.m).max().unwrap_or(1);
        let mut ms: Vec<usize> = (0..args.curve_points.max(2))
            .map(|k| {
                let t = k as f64 / (args.curve_points.max(2) - 1) as f64;
                (top as f64).powf(t).round() as usize
            })
            .chain(table.rows.iter().map(|r| r.m))
            .filter(|&m| m >= 1)
            .collect();
        ms.sort_unstable();
        ms.dedup();
        let mean = mean_local_dimensions(&table.schedule, &ms, args.samples, args.seed)?;
        let mut curve = String::from("m,d_m,predicted\n");
        for (m, d) in ms.iter().zip(mean) {
            let predicted = table
                .rows
                .iter()
                .find(|r| r.m == *m)
                .map(|r| fmt9(r.predicted))
                .unwrap_or_default();
            let _ = writeln!(curve, "{},{},{}", m, fmt9(d), predicted);
        }
        write_output(&Some(path.clone()), &curve, out)?;
    }
    Ok(EXIT_OK)
}

fn cmd_count(args: &CountArgs, out: &mut String) -> Result<i32> {
    let spec = load_carpet(&args.carpet)?;
    let count = count_entropy_bounded(&spec, args.n, args.h)?;
    let bound = types_bound(&spec, args.n, args.h);
    let ok = (count as f64) <= bound;
    let _ = writeln!(out, "count_entropy_bounded = {count}");
    let _ = writeln!(out, "types_bound = {}", fmt9(bound));
    if let Some(z) = args.z {
        let above = count_rowentropy_above(&spec, args.n, z)?;
        let _ = writeln!(out, "count_rowentropy_above = {above}");
    }
    let _ = writeln!(out, "{}", if ok { "PASS" } else { "FAIL" });
    Ok(if ok { EXIT_OK } else { EXIT_PROPERTY })
}

fn cmd_frontier(args: &FrontierArgs, out: &mut String) -> Result<i32> {
    let spec = load_carpet(&args.carpet)?;
    if args.points < 2 {
        return Err(Error::InvalidParams("--points must be >= 2".into()));
    }
    let f = Frontier::new(&spec);
    let (lo, hi) = (f.hr_max_entropy(), spec.log_r());
    let mut csv = String::from("z,psi,beta\n");
    for k in 0..args.points {
        let z = lo + (hi - lo) * k as f64 / (args.points - 1) as f64;
        let p = f.point(z)?;
        let _ = writeln!(csv, "{},{},{}", fmt9(p.z), fmt9(p.psi), fmt9(p.beta));
    }
    write_output(&args.out, &csv, out)?;
    Ok(EXIT_OK)
}

/// Runs a parsed command, returning its exit code and standard output.
pub fn execute(cli: &Cli) -> (i32, String) {
    let mut out = String::new();
    let result = match &cli.command {
        Command::Dim(a) => cmd_dim(a, &mut out),
        Command::Sweep(a) => cmd_sweep(a, &mut out),
        Command::Oracle(a) => cmd_oracle(a, &mut out),
        Command::Simulate(a) => cmd_simulate(a, &mut out),
        Command::Count(a) => cmd_count(a, &mut out),
        Command::Frontier(a) => cmd_frontier(a, &mut out),
    };
    match result {
        Ok(code) => (code, out),
        Err(e) => {
            let _ = writeln!(out, "error: {e}");
            (exit_code(&e), out)
        }
    }
}

/// Parses `args` (including the program name), runs, prints, returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    let (code, text) = execute(&cli);
    if code == EXIT_OK {
        print!("{text}");
    } else {
        eprint!("{text}");
    }
    code
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fmt9_examples() {
        assert_eq!(fmt9(4.0 / 3.0), "1.33333333");
        assert_eq!(fmt9(2.0), "2");
        assert_eq!(fmt9(0.75), "0.75");
        assert_eq!(fmt9(1234.5), "1234.5");
        assert_eq!(fmt9(9.9999999999), "10");
        assert_eq!(fmt9(1.5e-7), "1.5e-7");
        assert_eq!(fmt9(f64::INFINITY), "inf");
        assert_eq!(fmt9(-0.125), "-0.125");
    }

    #[test]
    fn alpha_grid_contract() {
        assert_eq!(alpha_grid(0.0, 1.0, 3).unwrap(), vec![0.0, 0.5, 1.0]);
        assert!(alpha_grid(1.0, 1.0, 2).is_err());
        assert!(alpha_grid(0.0, 1.0, 1).is_err());
    }

    #[test]
    fn bernoulli_file() {
        let spec = CarpetSpec::from_counts(2, 3, &[1, 2]).unwrap();
        let p = parse_bernoulli(&spec, r#"{"rows":[{"column":1,"weights":[0.5]},{"column":2,"weights":[0.25,0.25]}]}"#)
            .unwrap();
        assert_eq!(p.weights(), &[0.5, 0.25, 0.25]);
        assert!(parse_bernoulli(&spec, r#"{"rows":[{"column":1,"weights":[0.5, 0.5]}]}"#).is_err());
    }
}
