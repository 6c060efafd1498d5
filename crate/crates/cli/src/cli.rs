//! Argument parsing and subcommand dispatch.

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use fockorder_core::fock::{eval_exp, DEFAULT_MARGIN};
use fockorder_core::hermite2d::{h2_diag_via_laguerre, h2_eval};
use fockorder_core::ordered::{projector_laguerre, DEFAULT_CUTOFF};
use fockorder_core::phase_space::{projector_symbol, DEFAULT_HALF_WIDTH, DEFAULT_POINTS};
use fockorder_core::{
    basis_projector, convert_poly, exp_to_poly, matrix_distance, projector, sample_grid, OrderParameter,
    QuadratureGrid, TwoFloat,
};
use num_complex::Complex64;

use crate::formats::{parse_poly, poly_to_json, write_grid_csv, write_grid_json};
use crate::verify::{self, Suite};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "fockorder", version, about = "s-ordered boson operators: Hermite tables, ordering conversion, projectors and phase-space symbols")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate h_{m,n}(x, y | tau).
    EvalHermite(EvalHermiteArgs),
    /// Convert an ordered polynomial (JSON) to another ordering.
    ConvertOrder(ConvertArgs),
    /// Build the t-ordered form of |n><m|.
    Projector(ProjectorArgs),
    /// Tabulate the t-ordering symbol of |n><m| on a grid.
    QuasiprobGrid(GridArgs),
    /// Run the identity verification suites.
    Verify(VerifyArgs),
}

/// `re` or `re,im`.
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |p: &str| p.parse::<f64>().map_err(|e| format!("bad number {p:?}: {e}"));
    let z = match parts.as_slice() {
        [re] => Complex64::new(num(re)?, 0.0),
        [re, im] => Complex64::new(num(re)?, num(im)?),
        _ => return Err(format!("expected `re` or `re,im`, got {s:?}")),
    };
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(format!("non-finite value {s:?}"))
    }
}

fn parse_finite(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        Ok(v) => Err(format!("non-finite value {v}")),
        Err(e) => Err(e.to_string()),
    }
}

fn parse_positive(s: &str) -> Result<f64, String> {
    match parse_finite(s)? {
        v if v > 0.0 => Ok(v),
        v => Err(format!("must be positive, got {v}")),
    }
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct EvalHermiteArgs {
    #[arg(long, default_value_t = 0)]
    pub m: u32,
    #[arg(long, default_value_t = 0)]
    pub n: u32,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex, default_value = "0")]
    pub x: Complex64,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex, default_value = "0")]
    pub y: Complex64,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex, default_value = "0")]
    pub tau: Complex64,
    /// Also evaluate through the Laguerre relation (requires m = n, tau != 0).
    #[arg(long)]
    pub check_laguerre: bool,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct ConvertArgs {
    /// Input JSON file; `-` reads stdin.
    #[arg(long, default_value = "-")]
    pub input: String,
    #[arg(long, value_parser = parse_finite)]
    pub t: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct ProjectorArgs {
    #[arg(long, default_value_t = 0)]
    pub n: u32,
    #[arg(long, default_value_t = 0)]
    pub m: u32,
    #[arg(long, value_parser = parse_finite)]
    pub t: f64,
    /// Expand the exponential to this many terms and print the polynomial.
    #[arg(long, value_name = "CUTOFF")]
    pub expand: Option<u32>,
    /// Print the Laguerre-form parameters (requires m = n).
    #[arg(long)]
    pub laguerre_form: bool,
    /// Evaluate the expansion in the Fock oracle and report the distance to E_nm.
    #[arg(long)]
    pub verify: bool,
    #[arg(long = "D", default_value_t = 30)]
    pub dim: usize,
    #[arg(long, default_value_t = DEFAULT_MARGIN)]
    pub margin: usize,
    #[arg(long, default_value_t = 1e-8, value_parser = parse_positive)]
    pub tol: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GridFormat {
    Csv,
    Json,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct GridArgs {
    #[arg(long, default_value_t = 0)]
    pub n: u32,
    #[arg(long, default_value_t = 0)]
    pub m: u32,
    #[arg(long, value_parser = parse_finite)]
    pub t: f64,
    #[arg(long = "L", default_value_t = DEFAULT_HALF_WIDTH, value_parser = parse_positive)]
    pub half_width: f64,
    #[arg(long = "N", default_value_t = DEFAULT_POINTS)]
    pub points: usize,
    #[arg(long, value_enum, default_value_t = GridFormat::Csv)]
    pub format: GridFormat,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    pub suite: Suite,
    #[arg(long = "D", default_value_t = 30)]
    pub dim: usize,
    #[arg(long, default_value_t = DEFAULT_MARGIN)]
    pub margin: usize,
    /// Series cutoff for oracle images of ordered exponentials.
    #[arg(long, default_value_t = fockorder_core::fock::ORACLE_CUTOFF)]
    pub oracle_cutoff: u32,
    #[arg(long = "L", default_value_t = DEFAULT_HALF_WIDTH, value_parser = parse_positive)]
    pub half_width: f64,
    #[arg(long = "N", default_value_t = DEFAULT_POINTS)]
    pub points: usize,
    /// Ordering parameter for the integration-formula report.
    #[arg(long, default_value_t = 0.5, value_parser = parse_finite)]
    pub t: f64,
    /// Coherent amplitude `re,im` for the integration-formula report.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex, default_value = "0.7,0.2")]
    pub beta: Complex64,
}

/// Usage-level failure: bad flags or inputs, reported with exit code 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

/// `%.15g`-style rendering: 15 significant digits, trailing zeros dropped.
pub fn fmt_sig(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let sci = format!("{v:.14e}");
    let (mant, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    let trim = |s: &str| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s.to_string()
        }
    };
    if (-5..15).contains(&exp) {
        let decimals = (14 - exp).max(0) as usize;
        trim(&format!("{v:.decimals$}"))
    } else {
        format!("{}e{}", trim(mant), exp)
    }
}

pub fn fmt_complex(z: Complex64) -> String {
    let sign = if z.im.is_sign_negative() && z.im != 0.0 { '-' } else { '+' };
    format!("{} {} {}i", fmt_sig(z.re), sign, fmt_sig(z.im.abs()))
}

fn emit(out: &Option<PathBuf>, text: &str, stdout: &mut dyn Write) -> anyhow::Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => stdout.write_all(text.as_bytes()).context("writing stdout"),
    }
}

fn order(t: f64) -> OrderParameter {
    OrderParameter::new(t)
}

/// Run a parsed command; returns the process exit code.
pub fn run(cli: Cli, stdout: &mut dyn Write) -> anyhow::Result<i32> {
    match cli.command {
        Command::EvalHermite(a) => eval_hermite(a, stdout),
        Command::ConvertOrder(a) => convert_order(a, stdout),
        Command::Projector(a) => cmd_projector(a, stdout),
        Command::QuasiprobGrid(a) => quasiprob_grid(a, stdout),
        Command::Verify(a) => cmd_verify(a, stdout),
    }
}

fn eval_hermite(a: EvalHermiteArgs, stdout: &mut dyn Write) -> anyhow::Result<i32> {
    let v = h2_eval(a.m, a.n, a.x, a.y, a.tau).map_err(|e| usage(e.to_string()))?;
    if !a.check_laguerre {
        writeln!(stdout, "{}", fmt_complex(v))?;
        return Ok(EXIT_OK);
    }
    if a.m != a.n {
        return Err(usage("--check-laguerre needs m = n"));
    }
    let via = h2_diag_via_laguerre(a.n, a.x, a.y, a.tau).map_err(|e| usage(e.to_string()))?;
    writeln!(stdout, "definition: {}", fmt_complex(v))?;
    writeln!(stdout, "laguerre:   {}", fmt_complex(via))?;
    writeln!(stdout, "difference: {:.3e}", (v - via).norm())?;
    Ok(EXIT_OK)
}

fn convert_order(a: ConvertArgs, stdout: &mut dyn Write) -> anyhow::Result<i32> {
    let text = if a.input == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).context("reading stdin")?;
        s
    } else {
        fs::read_to_string(&a.input).map_err(|e| usage(format!("reading {}: {e}", a.input)))?
    };
    let poly = parse_poly(&text).map_err(|e| usage(e.to_string()))?;
    let converted = convert_poly(&poly, order(a.t)).map_err(|e| usage(e.to_string()))?;
    emit(&a.out, &poly_to_json(&converted), stdout)?;
    Ok(EXIT_OK)
}

fn cmd_projector(a: ProjectorArgs, stdout: &mut dyn Write) -> anyhow::Result<i32> {
    let t = order(a.t);
    let e = projector::<f64>(a.n, a.m, t).map_err(|e| usage(e.to_string()))?;
    if a.laguerre_form {
        if a.n != a.m {
            return Err(usage("--laguerre-form needs m = n"));
        }
        let lag = projector_laguerre::<f64>(a.n, t).map_err(|e| usage(e.to_string()))?;
        let text = format!(
            "form = f^(2n+1) kappa^n {{L_n(-a†a/kappa) e^(lambda a†a)}}_t\nn = {}\nf^(2n+1) = {}\nkappa = {}\nlambda = {}\norder = {}\n",
            lag.n,
            fmt_sig(lag.prefactor),
            fmt_sig(lag.kappa),
            fmt_sig(lag.lambda),
            fmt_sig(t.value()),
        );
        emit(&a.out, &text, stdout)?;
        return Ok(EXIT_OK);
    }
    if a.verify {
        if a.n as usize >= a.dim || a.m as usize >= a.dim {
            return Err(usage(format!("n and m must be below D = {}", a.dim)));
        }
        let cutoff = a.expand.unwrap_or(DEFAULT_CUTOFF);
        let p = projector::<TwoFloat>(a.n, a.m, t).map_err(|e| usage(e.to_string()))?;
        let got = eval_exp(&p, a.dim, cutoff).map_err(|e| usage(e.to_string()))?;
        let want = basis_projector::<TwoFloat>(a.n as usize, a.m as usize, a.dim).map_err(|e| usage(e.to_string()))?;
        let dist = matrix_distance(&got, &want, a.margin).map_err(|e| usage(e.to_string()))?;
        let tail = exp_to_poly(&e, cutoff).map_err(|e| usage(e.to_string()))?.tail;
        let ok = dist <= a.tol;
        let text = format!(
            "interior distance to E_{}{} (D = {}, margin = {}, cutoff = {}): {:.3e}\ntail diagnostic: {:.3e}\n{}\n",
            a.n,
            a.m,
            a.dim,
            a.margin,
            cutoff,
            dist,
            tail,
            if ok { "PASS" } else { "FAIL" }
        );
        emit(&a.out, &text, stdout)?;
        return Ok(if ok { EXIT_OK } else { EXIT_VERIFY_FAILED });
    }
    if let Some(cutoff) = a.expand {
        let exp = exp_to_poly(&e, cutoff).map_err(|e| usage(e.to_string()))?;
        emit(&a.out, &poly_to_json(&exp.poly), stdout)?;
        return Ok(EXIT_OK);
    }
    let text = format!(
        "form = c {{h_(n,m)(a†, a | kappa) e^(lambda a†a)}}_t\nprefactor = {}\nn = {}\nm = {}\nkappa = {}\nlambda = {}\norder = {}\n",
        fmt_complex(e.prefactor),
        e.n,
        e.m,
        fmt_complex(e.kappa),
        fmt_complex(e.lambda),
        fmt_sig(t.value()),
    );
    emit(&a.out, &text, stdout)?;
    Ok(EXIT_OK)
}

fn quasiprob_grid(a: GridArgs, stdout: &mut dyn Write) -> anyhow::Result<i32> {
    if a.points == 0 {
        return Err(usage("--N must be positive"));
    }
    let symbol = projector_symbol(a.n, a.m, order(a.t)).map_err(|e| usage(e.to_string()))?;
    let grid = sample_grid(symbol, a.half_width, a.points).map_err(|e| usage(e.to_string()))?;
    let mut buf = Vec::new();
    match a.format {
        GridFormat::Csv => write_grid_csv(&grid, &mut buf)?,
        GridFormat::Json => write_grid_json(&grid, &mut buf)?,
    }
    emit(&a.out, std::str::from_utf8(&buf).expect("formats emit UTF-8"), stdout)?;
    Ok(EXIT_OK)
}

fn cmd_verify(a: VerifyArgs, stdout: &mut dyn Write) -> anyhow::Result<i32> {
    let grid = QuadratureGrid::new(a.half_width, a.points).map_err(|e| usage(e.to_string()))?;
    if a.dim < 25 || a.dim > fockorder_core::fock::MAX_DIM {
        bail!(usage(format!("--D must lie in [25, {}]", fockorder_core::fock::MAX_DIM)));
    }
    if a.margin >= a.dim {
        return Err(usage("--margin must be below --D"));
    }
    let opts = verify::Options { dim: a.dim, margin: a.margin, cutoff: a.oracle_cutoff, grid, t: a.t, beta: a.beta };
    let report = verify::run(a.suite, &opts);
    stdout.write_all(report.render().as_bytes())?;
    match report.first_failure() {
        None => {
            writeln!(stdout, "all {} checks passed", report.checks.len())?;
            Ok(EXIT_OK)
        }
        Some(c) => {
            writeln!(stdout, "FAILED: {}/{}", c.suite, c.name)?;
            Ok(EXIT_VERIFY_FAILED)
        }
    }
}
