//! The `hadafrac` command-line front end.
//!
//! Exit codes: 0 all checks pass, 1 a mathematical check failed, 2 usage or
//! parse error, 3 numerical failure.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use crate::function::{parse_expr, RealFunction};
use crate::fuzz::{self, Family, FuzzConfig, FuzzError, Interval};
use crate::inequality::{InequalityError, TheoremId, Tolerance, DEFAULT_ABS_TOL, DEFAULT_REL_TOL};
use crate::operator::{
    build_graded_jacobi_rule, hadamard_derivative, hadamard_integral, integrate_ln,
    power_rule_integral, semigroup_residual, EvalPoint, OperatorError, QuadratureError,
    DEFAULT_NODES,
};
use crate::special::PositiveReal;

/// Grid swept by `powercheck`.
pub const POWER_GRID_BETA: [f64; 4] = [1.0, 1.5, 2.0, 3.0];
pub const POWER_GRID_ALPHA: [f64; 5] = [0.25, 0.5, 0.75, 1.0, 1.5];
pub const POWER_GRID_T: [f64; 3] = [1.5, std::f64::consts::E, 10.0];
pub const POWER_TOLERANCE: f64 = 1e-10;
pub const SEMIGROUP_TOLERANCE: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u8)]
pub enum Exit {
    Ok = 0,
    CheckFailed = 1,
    Usage = 2,
    Numerical = 3,
}

impl From<Exit> for ExitCode {
    fn from(e: Exit) -> Self {
        ExitCode::from(e as u8)
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "hadafrac",
    version,
    about = "Hadamard fractional integrals, derivatives and inequality checks"
)]
pub struct Cli {
    /// Quadrature nodes
    #[arg(long, global = true, default_value_t = DEFAULT_NODES)]
    pub nodes: usize,
    /// Relative tolerance for inequality checks
    #[arg(long, global = true, default_value_t = DEFAULT_REL_TOL)]
    pub rel_tol: f64,
    /// Master seed for fuzzing
    #[arg(long, global = true, env = "HADAFRAC_SEED", default_value_t = 1)]
    pub seed: u64,
    /// Write the report (CSV for fuzz) to this file instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the Hadamard fractional integral D^(-alpha) f(t)
    Integrate(IntegrateArgs),
    /// Evaluate the Hadamard fractional derivative D^alpha f(t), 0 < alpha < 1
    Derive(IntegrateArgs),
    /// Compare quadrature against the closed-form power rule on a grid
    Powercheck(PowercheckArgs),
    /// Residual of D^(-alpha) D^(-beta) f = D^(-(alpha+beta)) f
    Semigroup(SemigroupArgs),
    /// Run seeded trials of one inequality check
    Fuzz(FuzzArgs),
}

#[derive(Debug, Args)]
pub struct IntegrateArgs {
    /// Integrand in the variable x, e.g. "ln(x)^2 / 2"
    pub expr: String,
    #[arg(long, value_parser = parse_number, allow_hyphen_values = true)]
    pub alpha: f64,
    #[arg(long, value_parser = parse_number, allow_hyphen_values = true)]
    pub t: f64,
}

#[derive(Debug, Args)]
pub struct PowercheckArgs {
    #[arg(long, value_parser = parse_number, allow_hyphen_values = true, default_value = "3")]
    pub max_beta: f64,
    #[arg(long, value_parser = parse_number, allow_hyphen_values = true, default_value = "1.5")]
    pub max_alpha: f64,
}

#[derive(Debug, Args)]
pub struct SemigroupArgs {
    pub expr: String,
    #[arg(long, value_parser = parse_number, allow_hyphen_values = true)]
    pub alpha: f64,
    #[arg(long, value_parser = parse_number, allow_hyphen_values = true)]
    pub beta: f64,
    #[arg(long, value_parser = parse_number, allow_hyphen_values = true)]
    pub t: f64,
}

#[derive(Debug, Args)]
pub struct FuzzArgs {
    /// T31, T32, T33, P31, P32, P33, T34, YOUNG or POWMEAN
    #[arg(long)]
    pub theorem: TheoremId,
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
    #[arg(long, default_value_t = DEFAULT_ABS_TOL)]
    pub abs_tol: f64,
    #[arg(long, default_value_t = 0.1)]
    pub alpha_min: f64,
    #[arg(long, default_value_t = 5.0)]
    pub alpha_max: f64,
    #[arg(long, default_value_t = 0.1)]
    pub beta_min: f64,
    #[arg(long, default_value_t = 5.0)]
    pub beta_max: f64,
    #[arg(long, default_value_t = 1.1)]
    pub t_min: f64,
    #[arg(long, default_value_t = 10.0)]
    pub t_max: f64,
    /// Hölder exponent range (T34, YOUNG) or power-mean exponent (POWMEAN)
    #[arg(long, default_value_t = 1.1)]
    pub p_min: f64,
    #[arg(long, default_value_t = 4.0)]
    pub p_max: f64,
    /// mixed, tight, constant, smooth or piecewise
    #[arg(long, default_value_t = Family::Mixed)]
    pub family: Family,
}

/// Accepts a plain number or a constant expression such as `e` or `pi/2`.
fn parse_number(text: &str) -> Result<f64, String> {
    if let Ok(v) = text.trim().parse::<f64>() {
        return Ok(v);
    }
    let expr = parse_expr(text).map_err(|e| e.to_string())?;
    if !expr.is_constant() {
        return Err(format!("`{text}` is not a constant"));
    }
    expr.eval(1.0).map_err(|e| e.to_string())
}

/// Human-readable rendering with 15 digits after the point.
pub fn human(v: f64) -> String {
    let a = v.abs();
    if a == 0.0 || (1e-4..1e15).contains(&a) {
        format!("{v:.15}")
    } else {
        format!("{v:.14e}")
    }
}

struct Failure(Exit, String);

fn operator_exit(e: &OperatorError) -> Exit {
    match e {
        OperatorError::Quadrature(_) | OperatorError::Eval(_) | OperatorError::NonFinite => {
            Exit::Numerical
        }
        _ => Exit::Usage,
    }
}

impl From<OperatorError> for Failure {
    fn from(e: OperatorError) -> Self {
        Failure(operator_exit(&e), e.to_string())
    }
}

impl From<QuadratureError> for Failure {
    fn from(e: QuadratureError) -> Self {
        OperatorError::from(e).into()
    }
}

impl From<FuzzError> for Failure {
    fn from(e: FuzzError) -> Self {
        let code = match &e {
            FuzzError::Trial {
                source: InequalityError::Operator(op),
                ..
            } => operator_exit(op),
            FuzzError::Trial {
                source: InequalityError::Parameter(_),
                ..
            }
            | FuzzError::Config(_) => Exit::Usage,
            FuzzError::Io(_) | FuzzError::Csv(_) => Exit::Usage,
            // generated data broke its own envelope: treat as a numerical fault
            FuzzError::Trial { .. } | FuzzError::Generator(_) => Exit::Numerical,
        };
        Failure(code, e.to_string())
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure(Exit::Usage, msg.into())
}

fn io_failure(e: std::io::Error) -> Failure {
    usage(format!("write failed: {e}"))
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Exit
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{rendered}");
                    Exit::Ok
                }
                _ => {
                    let _ = write!(stderr, "{rendered}");
                    Exit::Usage
                }
            };
        }
    };
    match dispatch(&cli, stdout, stderr) {
        Ok(code) => code,
        Err(Failure(code, msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            code
        }
    }
}

fn dispatch(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<Exit, Failure> {
    if cli.nodes < 2 {
        return Err(usage(format!(
            "--nodes must be at least 2, got {}",
            cli.nodes
        )));
    }
    if !(cli.rel_tol >= 0.0) {
        return Err(usage(format!(
            "--rel-tol must be nonnegative, got {}",
            cli.rel_tol
        )));
    }
    if let Command::Fuzz(args) = &cli.command {
        return cmd_fuzz(cli, args, stdout, stderr);
    }
    let mut report = Vec::new();
    let code = match &cli.command {
        Command::Integrate(a) => cmd_integrate(cli, a, &mut report)?,
        Command::Derive(a) => cmd_derive(cli, a, &mut report, stderr)?,
        Command::Powercheck(a) => cmd_powercheck(cli, a, &mut report)?,
        Command::Semigroup(a) => cmd_semigroup(cli, a, &mut report)?,
        Command::Fuzz(_) => unreachable!(),
    };
    emit(cli, &report, stdout)?;
    Ok(code)
}

fn emit(cli: &Cli, bytes: &[u8], stdout: &mut dyn Write) -> Result<(), Failure> {
    match &cli.out {
        Some(path) => std::fs::write(path, bytes)
            .map_err(|e| usage(format!("cannot write {}: {e}", path.display()))),
        None => stdout.write_all(bytes).map_err(io_failure),
    }
}

fn function(text: &str) -> Result<RealFunction, Failure> {
    RealFunction::parse(text).map_err(|e| usage(format!("cannot parse `{text}`: {e}")))
}

fn positive(name: &str, v: f64) -> Result<PositiveReal, Failure> {
    PositiveReal::new(v).map_err(|_| {
        usage(format!(
            "--{name} must be a finite positive number, got {v}"
        ))
    })
}

fn eval_point(t: f64) -> Result<EvalPoint, Failure> {
    EvalPoint::new(t).map_err(|e| usage(e.to_string()))
}

fn cmd_integrate(cli: &Cli, a: &IntegrateArgs, out: &mut Vec<u8>) -> Result<Exit, Failure> {
    let f = function(&a.expr)?;
    let alpha = positive("alpha", a.alpha)?;
    let t = eval_point(a.t)?;
    let rule = build_graded_jacobi_rule(alpha, cli.nodes)?;
    let r = hadamard_integral(&f, alpha, t, &rule)?;
    writeln!(out, "{}", human(r.value)).map_err(io_failure)?;
    writeln!(out, "error estimate: {}", human(r.estimated_error)).map_err(io_failure)?;
    Ok(Exit::Ok)
}

fn cmd_derive(
    cli: &Cli,
    a: &IntegrateArgs,
    out: &mut Vec<u8>,
    stderr: &mut dyn Write,
) -> Result<Exit, Failure> {
    let f = function(&a.expr)?;
    if !(a.alpha > 0.0 && a.alpha < 1.0) {
        return Err(usage(format!(
            "--alpha must lie in (0, 1) for derive, got {}",
            a.alpha
        )));
    }
    let t = eval_point(a.t)?;
    let rule = build_graded_jacobi_rule(positive("alpha", 1.0 - a.alpha)?, cli.nodes)?;
    let r = hadamard_derivative(&f, a.alpha, t, &rule)?;
    writeln!(out, "{}", human(r.value)).map_err(io_failure)?;
    writeln!(out, "error estimate: {}", human(r.estimated_error)).map_err(io_failure)?;
    if r.rough {
        let _ = writeln!(
            stderr,
            "warning: one-sided differences disagree; the integrand may not be smooth near t"
        );
    }
    Ok(Exit::Ok)
}

/// Outcome of a power-rule sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct PowercheckSummary {
    pub cases: usize,
    pub failures: usize,
    pub max_rel_err: f64,
    /// `(beta, alpha, t)` at the maximum error.
    pub worst: (f64, f64, f64),
}

/// Sweeps the power-rule grid restricted to `beta ≤ max_beta`, `alpha ≤ max_alpha`.
pub fn powercheck(
    max_beta: f64,
    max_alpha: f64,
    nodes: usize,
) -> Result<PowercheckSummary, OperatorError> {
    let mut summary = PowercheckSummary {
        cases: 0,
        failures: 0,
        max_rel_err: 0.0,
        worst: (f64::NAN, f64::NAN, f64::NAN),
    };
    let beta_fn = |b: f64| RealFunction::LnPower(b - 1.0);
    for &a in POWER_GRID_ALPHA.iter().filter(|&&a| a <= max_alpha) {
        let alpha = PositiveReal::new(a)?;
        let rule = build_graded_jacobi_rule(alpha, nodes)?;
        for &b in POWER_GRID_BETA.iter().filter(|&&b| b <= max_beta) {
            let f = beta_fn(b);
            for &tv in &POWER_GRID_T {
                let t = EvalPoint::new(tv)?;
                let exact = power_rule_integral(PositiveReal::new(b)?, alpha, t)?;
                let got = integrate_ln(&f, t.ln(), &rule)?;
                let err = ((got - exact) / exact).abs();
                summary.cases += 1;
                if !(err < POWER_TOLERANCE) {
                    summary.failures += 1;
                }
                if !(err <= summary.max_rel_err) {
                    summary.max_rel_err = err;
                    summary.worst = (b, a, tv);
                }
            }
        }
    }
    Ok(summary)
}

fn cmd_powercheck(cli: &Cli, a: &PowercheckArgs, out: &mut Vec<u8>) -> Result<Exit, Failure> {
    positive("max-beta", a.max_beta)?;
    positive("max-alpha", a.max_alpha)?;
    let s = powercheck(a.max_beta, a.max_alpha, cli.nodes)?;
    if s.cases == 0 {
        return Err(usage(format!(
            "no grid point has beta <= {} and alpha <= {}; the grid starts at beta = 1, alpha = 0.25",
            a.max_beta, a.max_alpha
        )));
    }
    writeln!(out, "cases: {}", s.cases).map_err(io_failure)?;
    writeln!(out, "failures: {}", s.failures).map_err(io_failure)?;
    writeln!(out, "max relative error: {}", human(s.max_rel_err)).map_err(io_failure)?;
    let (b, al, t) = s.worst;
    writeln!(out, "worst case: beta={b} alpha={al} t={t}").map_err(io_failure)?;
    Ok(if s.failures == 0 {
        Exit::Ok
    } else {
        Exit::CheckFailed
    })
}

fn cmd_semigroup(cli: &Cli, a: &SemigroupArgs, out: &mut Vec<u8>) -> Result<Exit, Failure> {
    let f = function(&a.expr)?;
    let alpha = positive("alpha", a.alpha)?;
    let beta = positive("beta", a.beta)?;
    let t = eval_point(a.t)?;
    let residual = semigroup_residual(&f, alpha, beta, t, cli.nodes)?;
    writeln!(out, "residual: {}", human(residual)).map_err(io_failure)?;
    Ok(if residual < SEMIGROUP_TOLERANCE {
        Exit::Ok
    } else {
        Exit::CheckFailed
    })
}

fn fuzz_config(cli: &Cli, a: &FuzzArgs) -> FuzzConfig {
    FuzzConfig {
        theorem: a.theorem,
        trials: a.trials,
        master_seed: cli.seed,
        alpha_range: Interval::new(a.alpha_min, a.alpha_max),
        beta_range: Interval::new(a.beta_min, a.beta_max),
        t_range: Interval::new(a.t_min, a.t_max),
        p_range: Interval::new(a.p_min, a.p_max),
        nodes: cli.nodes,
        tolerance: Tolerance {
            rel: cli.rel_tol,
            abs: a.abs_tol,
        },
        family: a.family,
    }
}

fn cmd_fuzz(
    cli: &Cli,
    a: &FuzzArgs,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<Exit, Failure> {
    let cfg = fuzz_config(cli, a);
    let run = fuzz::run(&cfg)?;
    match &cli.out {
        Some(path) => {
            let file = File::create(path)
                .map_err(|e| usage(format!("cannot create {}: {e}", path.display())))?;
            let mut w = BufWriter::new(file);
            fuzz::write_csv(&run.records, &mut w)?;
            w.flush().map_err(io_failure)?;
            writeln!(stdout, "{}", run.summary).map_err(io_failure)?;
        }
        None => {
            fuzz::write_csv(&run.records, &mut *stdout)?;
            let _ = writeln!(stderr, "{}", run.summary);
        }
    }
    let mut failed = false;
    for rec in run.failures() {
        failed = true;
        let seed = rec.report.seed.unwrap_or_default();
        let _ = writeln!(
            stderr,
            "violation: {} ratio={} margin={} seed={seed}\n  reproduce: {}",
            rec.report.theorem,
            human(rec.report.ratio),
            human(rec.report.margin),
            cfg.reproducer(seed)
        );
    }
    Ok(if failed { Exit::CheckFailed } else { Exit::Ok })
}
