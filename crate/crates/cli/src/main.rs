#![allow(clippy::neg_cmp_op_on_partial_ord)]

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use curvebound::classical::{dominance_report_with, Competitor};
use curvebound::heat::{run_scenario, CalibratedReport, Scenario};
use curvebound::roots::{check_xi2_below_one, negative_root_bracket, xi1_bracket, xi2_bracket};
use curvebound::{
    domain_limit, eval_phi, eval_phi_limit, find_roots, harnack_exponent, CurvatureDimension, HarnackQuery,
    MarginReport, PsiFunction,
};
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "curvebound", version, about = "Improved Li-Yau gradient bounds under CD(rho, n)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate Phi_t(x).
    Phi(PhiArgs),
    /// Evaluate Psi_{t,rho}(x).
    Psi(PsiArgs),
    /// Evaluate the Legendre transform Psi*_{t,rho}(z).
    Legendre(LegendreArgs),
    /// Roots of Phi_t and their brackets.
    Roots(RootsArgs),
    /// Harnack exponent between (s, x) and (t, y) at distance d.
    Harnack(HarnackArgs),
    /// Compare the improved bound with the classical negative-curvature bounds.
    Compare(CompareArgs),
    /// Run a heat-equation verification scenario from a config file.
    Verify(VerifyArgs),
    /// Write sampled curves of Phi_t or Psi_{t,rho} as CSV.
    Curves(CurvesArgs),
}

#[derive(Args, Debug)]
struct PhiArgs {
    #[arg(long, allow_negative_numbers = true)]
    rho: f64,
    #[arg(long)]
    t: f64,
    #[arg(long, allow_negative_numbers = true)]
    x: f64,
}

#[derive(Args, Debug)]
struct PsiArgs {
    #[arg(long, allow_negative_numbers = true)]
    rho: f64,
    #[arg(long)]
    n: f64,
    #[arg(long)]
    t: f64,
    #[arg(long, allow_negative_numbers = true)]
    x: f64,
}

#[derive(Args, Debug)]
struct LegendreArgs {
    #[arg(long, allow_negative_numbers = true)]
    rho: f64,
    #[arg(long)]
    n: f64,
    #[arg(long)]
    t: f64,
    #[arg(long, allow_negative_numbers = true)]
    z: f64,
}

#[derive(Args, Debug)]
struct RootsArgs {
    #[arg(long, allow_negative_numbers = true)]
    rho: f64,
    #[arg(long)]
    t: f64,
}

#[derive(Args, Debug)]
struct HarnackArgs {
    #[arg(long)]
    n: f64,
    #[arg(long, allow_negative_numbers = true)]
    rho: f64,
    #[arg(long)]
    s: f64,
    #[arg(long)]
    t: f64,
    #[arg(long)]
    d: f64,
}

#[derive(Args, Debug)]
struct CompareArgs {
    #[arg(long, allow_negative_numbers = true)]
    rho: f64,
    /// Dimension; the comparison is dimension-free but n is validated.
    #[arg(long, default_value_t = 2.0)]
    n: f64,
    #[arg(long)]
    t: f64,
    /// Extra Davies parameter to compare against, in addition to the standard set.
    #[arg(long)]
    alpha: Option<f64>,
    /// Number of X grid points.
    #[arg(long, default_value_t = 400)]
    samples: usize,
    /// Write the reports as CSV to this file.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    config: PathBuf,
    /// Write the calibrated reports as CSV to this file.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Which {
    Phi,
    Psi,
}

#[derive(Args, Debug)]
struct CurvesArgs {
    #[arg(long, value_enum, default_value_t = Which::Phi)]
    which: Which,
    #[arg(long, allow_negative_numbers = true)]
    rho: f64,
    #[arg(long, default_value_t = 2.0)]
    n: f64,
    /// Comma-separated times, one column each.
    #[arg(long, value_delimiter = ',', required = true)]
    times: Vec<f64>,
    #[arg(long, allow_negative_numbers = true)]
    x_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    x_max: Option<f64>,
    #[arg(long, default_value_t = 201)]
    samples: usize,
    /// Add the large-time limit column (phi curves with rho < 0).
    #[arg(long)]
    limit: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Shortest round-trip decimal, with exponent notation outside `[1e-5, 1e16)`.
fn fmt_num(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let a = v.abs();
    if v.is_finite() && (1e-5..1e16).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

fn cd(rho: f64, n: f64) -> Result<CurvatureDimension> {
    Ok(CurvatureDimension::new(rho, n)?)
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn cmd_phi(a: &PhiArgs) -> Result<ExitCode> {
    let v = eval_phi(a.rho, a.t, a.x)?;
    println!("{}", fmt_num(v));
    Ok(ExitCode::SUCCESS)
}

fn cmd_psi(a: &PsiArgs) -> Result<ExitCode> {
    let psi = PsiFunction::new(&cd(a.rho, a.n)?, a.t)?;
    println!("{}", fmt_num(psi.value(a.x)?));
    Ok(ExitCode::SUCCESS)
}

fn cmd_legendre(a: &LegendreArgs) -> Result<ExitCode> {
    let l = PsiFunction::new(&cd(a.rho, a.n)?, a.t)?.legendre(a.z)?;
    println!("value={}", fmt_num(l.value));
    println!("argmax={}", fmt_num(l.argmax));
    Ok(ExitCode::SUCCESS)
}

fn cmd_roots(a: &RootsArgs) -> Result<ExitCode> {
    let roots = find_roots(a.rho, a.t)?;
    let pair = |lo: f64, hi: f64| format!("{},{}", fmt_num(lo), fmt_num(hi));
    if let (Some(x1), Some(x2)) = (roots.xi1, roots.xi2) {
        println!("xi1={}", fmt_num(x1.value));
        println!("xi2={}", fmt_num(x2.value));
        if let Some((lo, hi)) = xi1_bracket(a.rho, a.t) {
            println!("xi1_bracket={}", pair(lo, hi));
        }
        if let Some((lo, hi)) = xi2_bracket(a.rho, a.t) {
            println!("xi2_bracket={}", pair(lo, hi));
        }
        println!("xi2_below_one={}", check_xi2_below_one(a.rho, a.t)?);
    }
    if let Some(xi) = roots.xi {
        println!("xi={}", fmt_num(xi.value));
        if let Ok(b) = negative_root_bracket(a.rho, a.t) {
            println!("xi_bracket_literal={}", pair(b.literal_lo, b.hi));
            println!("xi_bracket_abs={}", pair(b.abs_lo, b.hi));
        }
    }
    println!("domain_limit={}", fmt_num(domain_limit(a.rho, a.t)));
    Ok(ExitCode::SUCCESS)
}

fn cmd_harnack(a: &HarnackArgs) -> Result<ExitCode> {
    let e = harnack_exponent(&cd(a.rho, a.n)?, &HarnackQuery::new(a.s, a.t, a.d)?)?;
    println!("{}", fmt_num(e));
    Ok(ExitCode::SUCCESS)
}

fn reports_csv(reports: &[MarginReport]) -> String {
    let mut s = String::from(MarginReport::CSV_HEADER);
    s.push('\n');
    for r in reports {
        s.push_str(&r.csv_row());
        s.push('\n');
    }
    s
}

fn cmd_compare(a: &CompareArgs) -> Result<ExitCode> {
    let c = cd(a.rho, a.n)?;
    let mut competitors = Competitor::standard_set();
    if let Some(alpha) = a.alpha {
        competitors.push(Competitor::Davies { alpha });
    }
    let reports = dominance_report_with(&c, a.t, a.samples, &competitors)?;
    for r in &reports {
        println!("{r}");
    }
    if let Some(path) = &a.out {
        emit(Some(path), &reports_csv(&reports))?;
    }
    Ok(if reports.iter().all(|r| r.passed) { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_verify(a: &VerifyArgs) -> Result<ExitCode> {
    let scenario = Scenario::from_path(&a.config)?;
    let reports = run_scenario(&scenario)?;
    for r in &reports {
        println!("{r}");
    }
    if let Some(path) = &a.out {
        let mut s = String::from(CalibratedReport::CSV_HEADER);
        s.push('\n');
        for r in &reports {
            s.push_str(&r.csv_row());
            s.push('\n');
        }
        emit(Some(path), &s)?;
    }
    Ok(if reports.iter().all(CalibratedReport::passed) { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn curve_range(a: &CurvesArgs, psis: &[PsiFunction]) -> Result<(f64, f64)> {
    let (lo, hi) = match a.which {
        Which::Phi => {
            let limit = a.times.iter().map(|&t| domain_limit(a.rho, t)).fold(f64::INFINITY, f64::min);
            let hi = if limit.is_finite() { 1.0 + 0.9 * (limit - 1.0) } else { 2.0 };
            (-3.0, hi.min(2.0))
        }
        Which::Psi => {
            let lo = psis.iter().map(|p| p.domain().lo).fold(f64::NEG_INFINITY, f64::max);
            let hi = psis.iter().map(|p| p.domain().hi).fold(f64::INFINITY, f64::min);
            (lo, if hi.is_finite() { hi } else { lo + 5.0 })
        }
    };
    let (lo, hi) = (a.x_min.unwrap_or(lo), a.x_max.unwrap_or(hi));
    if !(lo < hi) {
        bail!("empty x range [{lo}, {hi}]");
    }
    Ok((lo, hi))
}

fn cmd_curves(a: &CurvesArgs) -> Result<ExitCode> {
    if a.samples < 2 {
        bail!("samples must be at least 2");
    }
    if a.times.is_empty() {
        bail!("at least one time is required");
    }
    let c = cd(a.rho, a.n)?;
    if a.limit && !(a.which == Which::Phi && a.rho < 0.0) {
        bail!("the limit column is available for phi curves with rho < 0");
    }
    let psis = match a.which {
        Which::Psi => a.times.iter().map(|&t| PsiFunction::new(&c, t)).collect::<curvebound::Result<Vec<_>>>()?,
        Which::Phi => Vec::new(),
    };
    let (lo, hi) = curve_range(a, &psis)?;
    let mut s = String::from("x");
    for k in 1..=a.times.len() {
        s.push_str(&format!(",value_t{k}"));
    }
    if a.limit {
        s.push_str(",value_limit");
    }
    s.push('\n');
    let step = (hi - lo) / (a.samples - 1) as f64;
    for i in 0..a.samples {
        let x = if i + 1 == a.samples { hi } else { lo + step * i as f64 };
        s.push_str(&fmt_num(x));
        for (k, &t) in a.times.iter().enumerate() {
            let v = match a.which {
                Which::Phi => eval_phi(a.rho, t, x)?,
                Which::Psi => psis[k].value(x)?,
            };
            s.push(',');
            s.push_str(&fmt_num(v));
        }
        if a.limit {
            s.push(',');
            if x <= 1.0 {
                s.push_str(&fmt_num(eval_phi_limit(a.rho, x)?));
            }
        }
        s.push('\n');
    }
    emit(a.out.as_ref(), &s)?;
    Ok(ExitCode::SUCCESS)
}

fn run(cli: &Cli) -> Result<ExitCode> {
    match &cli.command {
        Command::Phi(a) => cmd_phi(a),
        Command::Psi(a) => cmd_psi(a),
        Command::Legendre(a) => cmd_legendre(a),
        Command::Roots(a) => cmd_roots(a),
        Command::Harnack(a) => cmd_harnack(a),
        Command::Compare(a) => cmd_compare(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Curves(a) => cmd_curves(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
