//! Command-line front end for the pseudogold library.
//!
//! Every command is deterministic given its full flag set. CSV output uses
//! frozen headers, 17 significant digits, '.' decimal separator, and '\n'
//! line endings so reruns are byte-identical.
//!
//! Exit codes: 0 success, 1 verification or numerical failure, 2 usage error.

mod svg;

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use pseudogold::experiments::{error_curve, fit_rate, monte_carlo, table1, RateFit};
use pseudogold::expansion::greedy_digits;
use pseudogold::parry::build_basis;
use pseudogold::verify::run_suite;
use pseudogold::{Error as LibError, ErrorCurve, SourceDensity};

#[derive(Parser)]
#[command(
    name = "pseudogold",
    version,
    about = "Greedy beta-expansion numerics for pseudo golden means",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Spectral report for one order: beta, all |lambda_j|, D(beta), t/(1+t)
    Basis {
        /// Order of the pseudo golden mean (>= 2)
        #[arg(long)]
        n: u32,
    },
    /// Rate-constant table as CSV, one row per order in 2..=n-max
    Table1 {
        #[arg(long, default_value_t = 10)]
        n_max: u32,
        /// Write the CSV to this file instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Greedy digit string of a point in [0,1)
    Expand {
        #[arg(long)]
        n: u32,
        /// Point to expand, in [0,1)
        #[arg(long)]
        x: f64,
        /// Number of digits to emit
        #[arg(long)]
        digits: usize,
    },
    /// sup/TV error of f_m against f_beta across m, with a log-linear rate fit
    Errors {
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum, default_value_t = SourceArg::Uniform)]
        source: SourceArg,
        /// Exponent for the power source (ignored by the others)
        #[arg(long, default_value_t = 2.0)]
        alpha: f64,
        #[arg(long, default_value_t = 5)]
        m_min: u32,
        /// Defaults to 20 for n=2, 18 for n=3, 16 otherwise
        #[arg(long)]
        m_max: Option<u32>,
        /// Evaluation points per f_beta piece
        #[arg(long, default_value_t = 512)]
        grid: usize,
        /// Write the table or plot to this file instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
        format: FormatArg,
    },
    /// Run the named invariant checks; exit 0 only if every one passes
    Verify {
        #[arg(long, default_value_t = 2)]
        n_min: u32,
        #[arg(long, default_value_t = 10)]
        n_max: u32,
    },
    /// Push source samples through m digit-map steps and compare with f_beta
    Montecarlo {
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum, default_value_t = SourceArg::Uniform)]
        source: SourceArg,
        /// Exponent for the power source (ignored by the others)
        #[arg(long, default_value_t = 2.0)]
        alpha: f64,
        /// Digit-map iterations per sample
        #[arg(long)]
        m: u32,
        /// Sample count (at least 10000)
        #[arg(long)]
        samples: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Write the CSV to this file instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SourceArg {
    /// f(x) = 1
    Uniform,
    /// f(x) = alpha x^(alpha-1)
    Power,
    /// f(x) = 2(1 - x)
    Affine,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Svg,
}

enum CliError {
    Lib(LibError),
    Io(std::io::Error),
}

impl From<LibError> for CliError {
    fn from(e: LibError) -> Self {
        CliError::Lib(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Lib(e) => e.fmt(f),
            CliError::Io(e) => write!(f, "io error: {e}"),
        }
    }
}

/// 2 for bad arguments (caught before or during setup), 1 for failures of
/// computations that were legitimately asked for.
fn exit_code(e: &CliError) -> u8 {
    match e {
        CliError::Lib(
            LibError::Domain(_)
            | LibError::UnsupportedOrder { .. }
            | LibError::UnsupportedSampling(_)
            | LibError::InvalidDensity(_)
            | LibError::BudgetExceeded { .. }
            | LibError::CountOverflow { .. },
        ) => 2,
        CliError::Lib(LibError::Numerical(_) | LibError::TooFewRows(_)) => 1,
        CliError::Io(_) => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn run(cmd: Cmd) -> Result<ExitCode, CliError> {
    match cmd {
        Cmd::Basis { n } => cmd_basis(n),
        Cmd::Table1 { n_max, out } => cmd_table1(n_max, out.as_deref()),
        Cmd::Expand { n, x, digits } => cmd_expand(n, x, digits),
        Cmd::Errors { n, source, alpha, m_min, m_max, grid, out, format } => {
            cmd_errors(n, source, alpha, m_min, m_max, grid, out.as_deref(), format)
        }
        Cmd::Verify { n_min, n_max } => cmd_verify(n_min, n_max),
        Cmd::Montecarlo { n, source, alpha, m, samples, seed, out } => {
            cmd_montecarlo(n, source, alpha, m, samples, seed, out.as_deref())
        }
    }
}

/// Decimal rendering with 12 significant digits.
fn sig12(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    let decimals = (11 - exp).max(0) as usize;
    format!("{x:.decimals$}")
}

fn make_source(source: SourceArg, alpha: f64) -> Result<SourceDensity, LibError> {
    match source {
        SourceArg::Uniform => Ok(SourceDensity::uniform()),
        SourceArg::Power => SourceDensity::power(alpha),
        SourceArg::Affine => Ok(SourceDensity::affine_decreasing()),
    }
}

/// stdout writer that dies quietly (exit 141, the SIGPIPE convention) when
/// the reader goes away, instead of panicking mid-report.
fn write_stdout(content: &str) {
    use std::io::Write as _;
    let mut stdout = std::io::stdout().lock();
    if stdout.write_all(content.as_bytes()).is_err() || stdout.flush().is_err() {
        std::process::exit(141);
    }
}

/// Writes to the path when given, otherwise to stdout, byte for byte.
fn emit(out: Option<&std::path::Path>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, content)?,
        None => write_stdout(content),
    }
    Ok(())
}

fn cmd_basis(n: u32) -> Result<ExitCode, CliError> {
    let basis = build_basis(n)?;
    let (t, ratio) = basis.rate_exponents();
    let mut report = format!("order n = {n}\nbeta = {}\n", sig12(basis.beta));
    for (j, root) in basis.roots.iter().enumerate() {
        let _ = writeln!(report, "|lambda_{}| = {}", j + 1, sig12(root.norm()));
    }
    let _ = writeln!(report, "D(beta) = {}", sig12(basis.d_beta));
    let _ = writeln!(report, "t = {}", sig12(t));
    let _ = writeln!(report, "t/(1+t) = {}", sig12(ratio));
    write_stdout(&report);
    Ok(ExitCode::SUCCESS)
}

fn cmd_table1(n_max: u32, out: Option<&std::path::Path>) -> Result<ExitCode, CliError> {
    let rows = table1(2, n_max)?;
    let mut csv = String::from("n,beta,lambda2_abs,beta_pow,t_ratio\n");
    for r in &rows {
        let _ = writeln!(
            csv,
            "{},{:.16e},{:.16e},{:.16e},{:.16e}",
            r.n, r.beta, r.lambda2_abs, r.beta_pow, r.t_ratio
        );
    }
    emit(out, &csv)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_expand(n: u32, x: f64, digits: usize) -> Result<ExitCode, CliError> {
    let basis = build_basis(n)?;
    let word = greedy_digits(&basis, x, digits)?;
    let mut line: String = word.digits.iter().map(|&d| char::from(b'0' + d)).collect();
    line.push('\n');
    write_stdout(&line);
    Ok(ExitCode::SUCCESS)
}

#[allow(clippy::too_many_arguments)]
fn cmd_errors(
    n: u32,
    source: SourceArg,
    alpha: f64,
    m_min: u32,
    m_max: Option<u32>,
    grid: usize,
    out: Option<&std::path::Path>,
    format: FormatArg,
) -> Result<ExitCode, CliError> {
    let basis = build_basis(n)?;
    let source = make_source(source, alpha)?;
    let m_max = m_max.unwrap_or(match n {
        2 => 20,
        3 => 18,
        _ => 16,
    });
    let curve = error_curve(&basis, &source, m_min, m_max, grid)?;
    let fit = fit_rate(&curve, &basis)?;

    match format {
        FormatArg::Csv => {
            let mut csv = String::from("m,sup_error,tv,ln_sup_error\n");
            for r in &curve.rows {
                let _ = writeln!(
                    csv,
                    "{},{:.16e},{:.16e},{:.16e}",
                    r.m,
                    r.sup_error,
                    r.tv,
                    r.sup_error.ln()
                );
            }
            emit(out, &csv)?;
        }
        FormatArg::Svg => emit(out, &error_plot(&curve, &fit))?,
    }

    let summary = format!(
        "slope = {}\nnormalized slope = {}\nr_squared = {}\nrows used = {} (dropped {})\n",
        sig12(fit.slope),
        sig12(fit.normalized),
        sig12(fit.r_squared),
        fit.used_rows,
        fit.dropped_rows
    );
    write_stdout(&summary);
    Ok(ExitCode::SUCCESS)
}

fn error_plot(curve: &ErrorCurve, fit: &RateFit) -> String {
    let pick = |f: fn(&pseudogold::experiments::ErrorRow) -> f64| -> Vec<(f64, f64)> {
        curve
            .rows
            .iter()
            .filter(|r| f(r) > 0.0)
            .map(|r| (r.m as f64, f(r).ln()))
            .collect()
    };
    let plot = svg::Plot {
        series: vec![
            svg::Series { name: "ln sup error", color: "crimson", points: pick(|r| r.sup_error) },
            svg::Series { name: "ln tv", color: "steelblue", points: pick(|r| r.tv) },
        ],
        fit: Some((fit.slope, fit.intercept)),
        x_label: "m",
        y_label: "ln error",
    };
    svg::render(&plot)
}

fn cmd_verify(n_min: u32, n_max: u32) -> Result<ExitCode, CliError> {
    if n_min < 2 || n_min > n_max {
        return Err(LibError::Domain(format!(
            "need 2 <= n_min <= n_max, got {n_min}..{n_max}"
        ))
        .into());
    }
    let results = run_suite(n_min, n_max)?;
    let mut failed = 0usize;
    let mut report = String::new();
    for r in &results {
        let tag = if r.passed { "PASS" } else { "FAIL" };
        let _ = writeln!(report, "{tag} n={} {}: {}", r.n, r.name, r.detail);
        failed += usize::from(!r.passed);
    }
    let _ = writeln!(report, "{} checks, {} failed", results.len(), failed);
    write_stdout(&report);
    Ok(if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

#[allow(clippy::too_many_arguments)]
fn cmd_montecarlo(
    n: u32,
    source: SourceArg,
    alpha: f64,
    m: u32,
    samples: u64,
    seed: u64,
    out: Option<&std::path::Path>,
) -> Result<ExitCode, CliError> {
    let basis = build_basis(n)?;
    let source = make_source(source, alpha)?;
    let report = monte_carlo(&basis, &source, m, samples, seed)?;
    let mut csv = String::from("n,m,samples,seed,ks_stat,tv_bins\n");
    let _ = writeln!(
        csv,
        "{},{},{},{},{:.16e},{:.16e}",
        report.n, report.m, report.sample_count, report.seed, report.ks_stat, report.tv_bins
    );
    emit(out, &csv)?;
    Ok(ExitCode::SUCCESS)
}
