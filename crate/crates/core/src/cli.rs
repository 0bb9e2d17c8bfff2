//! Command-line front end: problem setup from flags and config files, the
//! solve/converge/compat/quadcheck drivers, and CSV output.

use std::collections::HashMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write as _};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use thiserror::Error;

use crate::collocation::{assemble, solve, uniform_point, Problem, SpectralSolution};
use crate::jacobi::{gauss_rule, monomial_moments, JacobiParams, MAX_DEGREE};
use crate::nonlocal::{HorizonGeometry, Kernel};
use crate::oracle::{constant_kernel_exp_rhs, gaussian_quadratic_rhs, manufactured_rhs};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_IO: i32 = 4;

pub const SCHEMA_LINE: &str = "# schema=1";

/// Tolerance handed to the reference oracle in `--rhs oracle` mode.
const ORACLE_TOL: f64 = 1e-13;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Numerical(#[from] crate::Error),
    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) => EXIT_CONFIG,
            Self::Numerical(_) => EXIT_NUMERICAL,
            Self::Io { .. } => EXIT_IO,
        }
    }

    fn config(msg: impl Into<String>) -> Self {
        Self::Config(msg.into())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(
    name = "jacobi-nonlocal",
    version,
    about = "Jacobi spectral collocation for weakly singular nonlocal diffusion"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: CommandArgs,
}

#[derive(Debug, Subcommand)]
pub enum CommandArgs {
    /// Solve once and tabulate u_N against the exact solution on the sampling grid.
    Solve(Flags),
    /// L-infinity / L2 errors, condition number and timings over a list of N.
    Converge(Flags),
    /// Asymptotic compatibility sweep with delta = 1/N (constant kernel only; --delta and --rhs are ignored).
    Compat(Flags),
    /// Exactness and weight-sum diagnostics of the Gauss-Jacobi rules; --N lists the rule sizes M.
    Quadcheck(Flags),
}

#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// Kernel: constant | gaussian [default: constant]
    #[arg(long)]
    pub kernel: Option<String>,
    /// Singularity exponent in (0, 1) [default: 0.5]
    #[arg(long, allow_hyphen_values = true)]
    pub mu: Option<f64>,
    /// Horizon radius in (0, 2) [default: 0.2]
    #[arg(long, allow_hyphen_values = true)]
    pub delta: Option<f64>,
    /// Collocation family: legendre | chebyshev | jacobi(a,b) [default: legendre]
    #[arg(long)]
    pub basis: Option<String>,
    /// Comma-separated, strictly increasing degrees [default: solve 12; converge 4,6,...,18; compat 8,16,32,64; quadcheck 4,8,16,32]
    #[arg(long = "N", value_name = "LIST", allow_hyphen_values = true)]
    pub n_list: Option<String>,
    /// Gauss-Jacobi points per half horizon [default: N]
    #[arg(long = "M", allow_hyphen_values = true)]
    pub m: Option<i64>,
    /// Source term: analytic | oracle [default: analytic]
    #[arg(long)]
    pub rhs: Option<String>,
    /// Points of the uniform L-infinity grid [default: 1000]
    #[arg(long, allow_hyphen_values = true)]
    pub samples: Option<i64>,
    /// Output CSV path [default: stdout]
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Config file with `key = value` lines; flags take precedence
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Solve,
    Converge,
    Compat,
    Quadcheck,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelName {
    Constant,
    Gaussian,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BasisChoice {
    Legendre,
    Chebyshev,
    Jacobi(f64, f64),
}

impl BasisChoice {
    pub fn params(self) -> crate::Result<JacobiParams> {
        match self {
            Self::Legendre => Ok(JacobiParams::legendre()),
            Self::Chebyshev => Ok(JacobiParams::chebyshev()),
            Self::Jacobi(a, b) => JacobiParams::new(a, b),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RhsMode {
    Analytic,
    Oracle,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub kernel: KernelName,
    pub mu: f64,
    pub delta: f64,
    pub basis: BasisChoice,
    pub n_list: Vec<usize>,
    pub m: Option<usize>,
    pub rhs_mode: RhsMode,
    pub output_path: Option<PathBuf>,
    pub samples: usize,
}

/// Settings gathered from one source (file or flags), all optional.
#[derive(Debug, Default)]
struct Settings {
    kernel: Option<String>,
    mu: Option<f64>,
    delta: Option<f64>,
    basis: Option<String>,
    n_list: Option<String>,
    m: Option<i64>,
    rhs: Option<String>,
    samples: Option<i64>,
    out: Option<PathBuf>,
}

impl Settings {
    fn from_flags(f: &Flags) -> Self {
        Self {
            kernel: f.kernel.clone(),
            mu: f.mu,
            delta: f.delta,
            basis: f.basis.clone(),
            n_list: f.n_list.clone(),
            m: f.m,
            rhs: f.rhs.clone(),
            samples: f.samples,
            out: f.out.clone(),
        }
    }

    fn overridden_by(self, top: Self) -> Self {
        Self {
            kernel: top.kernel.or(self.kernel),
            mu: top.mu.or(self.mu),
            delta: top.delta.or(self.delta),
            basis: top.basis.or(self.basis),
            n_list: top.n_list.or(self.n_list),
            m: top.m.or(self.m),
            rhs: top.rhs.or(self.rhs),
            samples: top.samples.or(self.samples),
            out: top.out.or(self.out),
        }
    }
}

fn parse_number<T: std::str::FromStr>(key: &str, value: &str) -> CliResult<T> {
    value
        .trim()
        .parse()
        .map_err(|_| CliError::config(format!("`{key}`: cannot parse `{value}` as a number")))
}

/// Parses the `key = value` config format. Blank lines and `#` comments are skipped.
fn parse_config_text(text: &str) -> CliResult<Settings> {
    let mut seen: HashMap<String, usize> = HashMap::new();
    let mut s = Settings::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::config(format!(
                "config line {}: expected `key = value`",
                lineno + 1
            ))
        })?;
        let (key, value) = (key.trim(), value.trim());
        if let Some(prev) = seen.insert(key.to_string(), lineno + 1) {
            return Err(CliError::config(format!(
                "config key `{key}` given twice (lines {prev} and {})",
                lineno + 1
            )));
        }
        match key {
            "kernel" => s.kernel = Some(value.to_string()),
            "mu" => s.mu = Some(parse_number(key, value)?),
            "delta" => s.delta = Some(parse_number(key, value)?),
            "basis" => s.basis = Some(value.to_string()),
            "N" => s.n_list = Some(value.to_string()),
            "M" => s.m = Some(parse_number(key, value)?),
            "rhs" => s.rhs = Some(value.to_string()),
            "samples" => s.samples = Some(parse_number(key, value)?),
            "out" => s.out = Some(PathBuf::from(value)),
            other => return Err(CliError::config(format!("unknown config key `{other}`"))),
        }
    }
    Ok(s)
}

fn parse_kernel(v: &str) -> CliResult<KernelName> {
    match v.trim().to_ascii_lowercase().as_str() {
        "constant" => Ok(KernelName::Constant),
        "gaussian" => Ok(KernelName::Gaussian),
        other => Err(CliError::config(format!(
            "`kernel`: unknown kernel `{other}`"
        ))),
    }
}

pub fn parse_basis(v: &str) -> CliResult<BasisChoice> {
    let t = v.trim().to_ascii_lowercase();
    match t.as_str() {
        "legendre" => return Ok(BasisChoice::Legendre),
        "chebyshev" => return Ok(BasisChoice::Chebyshev),
        _ => {}
    }
    let inner = t
        .strip_prefix("jacobi(")
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| {
            CliError::config(format!(
                "`basis`: expected legendre, chebyshev or jacobi(a,b), got `{v}`"
            ))
        })?;
    let (a, b) = inner.split_once(',').ok_or_else(|| {
        CliError::config(format!("`basis`: jacobi needs two exponents, got `{v}`"))
    })?;
    let (a, b) = (
        parse_number::<f64>("basis", a)?,
        parse_number::<f64>("basis", b)?,
    );
    if !(a > -1.0 && b > -1.0 && a.is_finite() && b.is_finite()) {
        return Err(CliError::config(format!(
            "`basis`: Jacobi exponents must exceed -1, got ({a}, {b})"
        )));
    }
    Ok(BasisChoice::Jacobi(a, b))
}

fn parse_rhs(v: &str) -> CliResult<RhsMode> {
    match v.trim().to_ascii_lowercase().as_str() {
        "analytic" => Ok(RhsMode::Analytic),
        "oracle" => Ok(RhsMode::Oracle),
        other => Err(CliError::config(format!(
            "`rhs`: expected analytic or oracle, got `{other}`"
        ))),
    }
}

pub fn parse_n_list(v: &str) -> CliResult<Vec<usize>> {
    let mut out = Vec::new();
    for part in v.split(',') {
        let n: i64 = parse_number("N", part)?;
        if n < 2 || n > MAX_DEGREE as i64 {
            return Err(CliError::config(format!(
                "`N`: every degree must lie in [2, {MAX_DEGREE}], got {n}"
            )));
        }
        let n = n as usize;
        if out.last().is_some_and(|&prev| n <= prev) {
            return Err(CliError::config("`N`: list must be strictly increasing"));
        }
        out.push(n);
    }
    Ok(out)
}

fn default_n_list(command: Command) -> Vec<usize> {
    match command {
        Command::Solve => vec![12],
        Command::Converge => vec![4, 6, 8, 10, 12, 14, 16, 18],
        Command::Compat => vec![8, 16, 32, 64],
        Command::Quadcheck => vec![4, 8, 16, 32],
    }
}

fn validate(command: Command, s: Settings) -> CliResult<RunConfig> {
    let kernel = s
        .kernel
        .as_deref()
        .map(parse_kernel)
        .transpose()?
        .unwrap_or(KernelName::Constant);
    let mu = s.mu.unwrap_or(0.5);
    if !(mu > 0.0 && mu < 1.0) {
        return Err(CliError::config(format!(
            "`mu`: must lie in (0, 1), got {mu}"
        )));
    }
    let delta = s.delta.unwrap_or(0.2);
    if !(delta > 0.0 && delta < 2.0) {
        return Err(CliError::config(format!(
            "`delta`: must lie in (0, 2), got {delta}"
        )));
    }
    let basis = s
        .basis
        .as_deref()
        .map(parse_basis)
        .transpose()?
        .unwrap_or(BasisChoice::Legendre);
    let n_list = match s.n_list.as_deref() {
        Some(v) => parse_n_list(v)?,
        None => default_n_list(command),
    };
    let m = match s.m {
        None => None,
        Some(m) if (1..=MAX_DEGREE as i64).contains(&m) => Some(m as usize),
        Some(m) => {
            return Err(CliError::config(format!(
                "`M`: must lie in [1, {MAX_DEGREE}], got {m}"
            )))
        }
    };
    let rhs_mode = s
        .rhs
        .as_deref()
        .map(parse_rhs)
        .transpose()?
        .unwrap_or(RhsMode::Analytic);
    let samples = match s.samples {
        None => 1000,
        Some(n) if n >= 2 => n as usize,
        Some(n) => {
            return Err(CliError::config(format!(
                "`samples`: need at least 2, got {n}"
            )))
        }
    };
    if command == Command::Solve && n_list.len() != 1 {
        return Err(CliError::config("`N`: solve takes a single degree"));
    }
    if command == Command::Compat && kernel != KernelName::Constant {
        return Err(CliError::config(
            "`kernel`: the compatibility sweep is defined for the constant kernel",
        ));
    }
    if matches!(command, Command::Solve | Command::Converge)
        && kernel == KernelName::Constant
        && rhs_mode == RhsMode::Analytic
        && mu != 0.5
    {
        return Err(CliError::config(
            "`rhs`: the analytic source for the constant kernel needs mu = 0.5; use --rhs oracle",
        ));
    }
    Ok(RunConfig {
        command,
        kernel,
        mu,
        delta,
        basis,
        n_list,
        m,
        rhs_mode,
        output_path: s.out,
        samples,
    })
}

/// Builds the run configuration from `argv` (program name first) and the
/// optional `--config` file. Flags override file keys.
pub fn parse_config<I, T>(argv: I) -> std::result::Result<RunConfig, ParseOutcome>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(ParseOutcome::Clap)?;
    let (command, flags) = match &cli.command {
        CommandArgs::Solve(f) => (Command::Solve, f),
        CommandArgs::Converge(f) => (Command::Converge, f),
        CommandArgs::Compat(f) => (Command::Compat, f),
        CommandArgs::Quadcheck(f) => (Command::Quadcheck, f),
    };
    let from_file = match &flags.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|source| {
                ParseOutcome::Cli(CliError::Io {
                    path: path.display().to_string(),
                    source,
                })
            })?;
            parse_config_text(&text).map_err(ParseOutcome::Cli)?
        }
        None => Settings::default(),
    };
    let merged = from_file.overridden_by(Settings::from_flags(flags));
    validate(command, merged).map_err(ParseOutcome::Cli)
}

/// Why [`parse_config`] did not produce a configuration.
#[derive(Debug)]
pub enum ParseOutcome {
    /// Usage error, or a `--help` / `--version` request.
    Clap(clap::Error),
    Cli(CliError),
}

/// A CSV table with leading comment lines and optional trailing comments.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub trailer: Vec<String>,
}

impl Table {
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(SCHEMA_LINE);
        out.push('\n');
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        for line in &self.trailer {
            let _ = writeln!(out, "# {line}");
        }
        out
    }
}

fn sci(v: f64) -> String {
    format!("{v:.16e}")
}

fn millis(since: Instant) -> String {
    format!("{:.3}", since.elapsed().as_secs_f64() * 1e3)
}

fn exact_solution(kernel: KernelName) -> fn(f64) -> f64 {
    match kernel {
        KernelName::Constant => |x| x * x.exp(),
        KernelName::Gaussian => |x| x * (1.0 - x),
    }
}

fn build_problem(config: &RunConfig, n: usize) -> CliResult<Problem> {
    let geom = HorizonGeometry::new(config.delta, config.mu)?;
    let kernel = match config.kernel {
        KernelName::Constant => Kernel::moment_normalized_constant(&geom, 1.0),
        KernelName::Gaussian => Kernel::Gaussian,
    };
    let exact = exact_solution(config.kernel);
    let basis = config.basis.params()?;
    let problem = match (config.rhs_mode, config.kernel) {
        (RhsMode::Oracle, _) => {
            let f = manufactured_rhs(exact, kernel.clone(), geom, ORACLE_TOL)?.into_fn();
            Problem::new(geom, kernel, f, exact, basis, n)?
        }
        (RhsMode::Analytic, KernelName::Constant) => {
            constant_kernel_exp_rhs(0.0, &geom)?;
            Problem::new(
                geom,
                kernel,
                move |x| constant_kernel_exp_rhs(x, &geom).unwrap_or(f64::NAN),
                exact,
                basis,
                n,
            )?
        }
        (RhsMode::Analytic, KernelName::Gaussian) => {
            let f = gaussian_quadratic_rhs(&geom)?;
            Problem::new(geom, kernel, move |_| f, exact, basis, n)?
        }
    };
    Ok(match config.m {
        Some(m) => problem.with_quadrature_points(m)?,
        None => problem,
    })
}

fn l2_points(n: usize) -> usize {
    (2 * n + 2).min(MAX_DEGREE).max(n + 1)
}

struct Timed {
    solution: SpectralSolution,
    assembly_ms: String,
    solve_ms: String,
}

fn timed_solve(problem: &Problem) -> CliResult<Timed> {
    let t0 = Instant::now();
    let system = assemble(problem)?;
    let assembly_ms = millis(t0);
    let t1 = Instant::now();
    let solution = solve(&system)?;
    let solve_ms = millis(t1);
    Ok(Timed {
        solution,
        assembly_ms,
        solve_ms,
    })
}

pub fn run_solve(config: &RunConfig) -> CliResult<Table> {
    let n = config.n_list[0];
    let problem = build_problem(config, n)?;
    let timed = timed_solve(&problem)?;
    let sol = &timed.solution;
    let exact = exact_solution(config.kernel);
    let mut rows = Vec::with_capacity(config.samples);
    for k in 0..config.samples {
        let x = uniform_point(k, config.samples);
        let u = sol.evaluate(x)?;
        let e = exact(x);
        rows.push(vec![sci(x), sci(u), sci(e), sci((u - e).abs())]);
    }
    let linf = sol.linf_error(exact, config.samples)?;
    let l2 = sol.l2_error(exact, l2_points(n))?;
    Ok(Table {
        columns: vec!["x", "u_n", "u_exact", "abs_error"],
        rows,
        trailer: vec![
            format!("N={n} M={}", problem.quad_points()),
            format!("linf_error={}", sci(linf)),
            format!("l2_error={}", sci(l2)),
            format!("cond_estimate={}", sci(sol.condition_estimate())),
        ],
    })
}

pub fn run_converge(config: &RunConfig) -> CliResult<Table> {
    let exact = exact_solution(config.kernel);
    let rows = config
        .n_list
        .par_iter()
        .map(|&n| -> CliResult<Vec<String>> {
            let problem = build_problem(config, n)?;
            let timed = timed_solve(&problem)?;
            let sol = &timed.solution;
            Ok(vec![
                n.to_string(),
                sci(sol.linf_error(exact, config.samples)?),
                sci(sol.l2_error(exact, l2_points(n))?),
                sci(sol.condition_estimate()),
                timed.assembly_ms,
                timed.solve_ms,
            ])
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(Table {
        columns: vec![
            "N",
            "linf_error",
            "l2_error",
            "cond_estimate",
            "assembly_ms",
            "solve_ms",
        ],
        rows,
        trailer: Vec::new(),
    })
}

/// Local-limit source `-(x + 2) e^x` for `u0(x) = x e^x` under unit diffusion.
pub fn compat_source(x: f64) -> f64 {
    -(x + 2.0) * x.exp()
}

pub fn compat_solution(x: f64) -> f64 {
    x * x.exp()
}

/// Least-squares slope of `log(error)` against `log(delta)`; `None` below 3 points.
pub fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 3 {
        return None;
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(d, e)| (d.ln(), e.ln())).collect();
    let n = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Some(sxy / sxx)
}

/// One point of the compatibility sweep: `delta = 1/N`, kernel rescaled to
/// unit second moment. Returns `(delta, L2 error against u0)`.
pub fn compat_point(config: &RunConfig, n: usize) -> CliResult<(f64, f64)> {
    let delta = 1.0 / n as f64;
    let geom = HorizonGeometry::new(delta, config.mu)?;
    let kernel = Kernel::moment_normalized_constant(&geom, 1.0);
    let mut problem = Problem::new(
        geom,
        kernel,
        compat_source,
        compat_solution,
        config.basis.params()?,
        n,
    )?;
    if let Some(m) = config.m {
        problem = problem.with_quadrature_points(m)?;
    }
    let sol = solve(&assemble(&problem)?)?;
    Ok((delta, sol.l2_error(compat_solution, l2_points(n))?))
}

pub fn run_compat(config: &RunConfig) -> CliResult<Table> {
    let points = config
        .n_list
        .par_iter()
        .map(|&n| compat_point(config, n))
        .collect::<CliResult<Vec<_>>>()?;
    let rows = config
        .n_list
        .iter()
        .zip(&points)
        .map(|(n, &(d, e))| vec![n.to_string(), sci(d), sci(e)])
        .collect();
    let trailer = loglog_slope(&points)
        .map(|s| vec![format!("slope={}", sci(s))])
        .unwrap_or_default();
    Ok(Table {
        columns: vec!["N", "delta", "l2_error_vs_u0"],
        rows,
        trailer,
    })
}

/// `(max relative monomial error up to degree 2M - 1, |weight sum - zeroth moment|)`
/// for the `m`-point Gauss rule. Monomials with a vanishing moment are measured
/// against the moment of `|x|^k`.
pub fn quadrature_check(params: JacobiParams, m: usize) -> crate::Result<(f64, f64)> {
    let rule = gauss_rule(params, m)?;
    let moments = monomial_moments(params, 2 * m);
    let mut worst = 0.0_f64;
    for (k, &exact) in moments.iter().enumerate() {
        let mut q = 0.0;
        let mut q_abs = 0.0;
        for (x, w) in rule.iter() {
            let p = x.powi(k as i32);
            q += w * p;
            q_abs += w * p.abs();
        }
        let scale = if exact != 0.0 { exact.abs() } else { q_abs };
        worst = worst.max((q - exact).abs() / scale);
    }
    let sum: f64 = rule.weights().iter().sum();
    Ok((worst, (sum - params.zeroth_moment()).abs()))
}

pub fn run_quadcheck(config: &RunConfig) -> CliResult<Table> {
    let params = config.basis.params()?;
    let mut rows = Vec::new();
    for &m in &config.n_list {
        let (exactness, sum_dev) = quadrature_check(params, m)?;
        rows.push(vec![
            format!("{}", params.alpha()),
            format!("{}", params.beta()),
            m.to_string(),
            sci(exactness),
            sci(sum_dev),
        ]);
    }
    Ok(Table {
        columns: vec![
            "alpha",
            "beta",
            "M",
            "max_exactness_error",
            "weight_sum_deviation",
        ],
        rows,
        trailer: Vec::new(),
    })
}

pub fn run(config: &RunConfig) -> CliResult<Table> {
    match config.command {
        Command::Solve => run_solve(config),
        Command::Converge => run_converge(config),
        Command::Compat => run_compat(config),
        Command::Quadcheck => run_quadcheck(config),
    }
}

fn write_output(path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|source| CliError::Io {
            path: p.display().to_string(),
            source,
        }),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io {
                path: "<stdout>".into(),
                source,
            }),
    }
}

/// Entry point shared by the binary; returns the process exit code.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match parse_config(argv) {
        Ok(c) => c,
        Err(ParseOutcome::Clap(e)) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
        Err(ParseOutcome::Cli(e)) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    match run(&config).and_then(|t| write_output(config.output_path.as_deref(), &t.to_csv())) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
