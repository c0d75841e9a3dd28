//! Command-line surface: operator profiling, functional-calculus evaluation,
//! inequality suites, Besov bounds, and parameter sweeps.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use rittcalc::error::Error;
use rittcalc::report::BoundReport;
use rittcalc::{fcalc, io, operators, profile, suites};

const EXIT_CONFIG: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;
const EXIT_BOUND_VIOLATION: u8 = 4;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
}

#[derive(Parser)]
#[command(name = "rittcalc", version, about = "Resolvent-condition operator workbench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Profile an operator: resolvent constants, power bounds, type angle.
    Analyze {
        matrix: PathBuf,
        #[arg(long, default_value_t = 256)]
        grid: usize,
        #[arg(long = "n-max", default_value_t = 4096)]
        n_max: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate p(T) by contour quadrature and cross-check against Horner.
    Fcalc {
        matrix: PathBuf,
        #[arg(long)]
        poly: PathBuf,
        #[arg(long)]
        eta: Option<f64>,
        #[arg(long)]
        r: Option<f64>,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, default_value_t = 256)]
        grid: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a named inequality suite (lemma2 | thm1 | thm2 | bernstein | sqfe | besov | kreiss).
    Verify {
        suite: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 192)]
        grid: usize,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// acceptance-scale sample counts instead of the quick defaults
        #[arg(long)]
        full: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
    },
    /// Besov-norm bound for one operator and polynomial.
    Besov {
        matrix: PathBuf,
        #[arg(long)]
        poly: PathBuf,
        #[arg(long, default_value_t = 256)]
        grid: usize,
        #[arg(long = "n-max", default_value_t = 4096)]
        n_max: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
    },
    /// Sweep (m, n) degree windows: search lower bounds against the calculus
    /// upper bound.
    Sweep {
        matrix: PathBuf,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 256)]
        grid: usize,
        #[arg(long = "n-max", default_value_t = 256)]
        n_max: usize,
        #[arg(long, default_value_t = 0.5)]
        s: f64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
    },
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::ConfigError(_)
        | Error::ParseError { .. }
        | Error::ShapeError { .. }
        | Error::BadParameters { .. }
        | Error::PrecisionLoss { .. }
        | Error::EtaTooSmall { .. }
        | Error::Io(_) => EXIT_CONFIG,
        _ => EXIT_NUMERICAL,
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(Error::from),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn emit_reports(
    reports: &[BoundReport],
    out: &Option<PathBuf>,
    format: OutputFormat,
) -> Result<u8, Error> {
    let text = match format {
        OutputFormat::Json => io::reports_to_json(reports),
        OutputFormat::Csv => io::reports_to_csv(reports),
    };
    emit(out, &text)?;
    let failed = reports.iter().filter(|r| !r.pass).count();
    for r in reports {
        eprintln!(
            "{} [{}] lhs={:.6e} rhs={:.6e} ({})",
            if r.pass { "pass" } else { "FAIL" },
            r.name,
            r.lhs,
            r.rhs,
            r.inputs
        );
    }
    Ok(if failed == 0 { 0 } else { EXIT_BOUND_VIOLATION })
}

fn check_threads_env() -> Result<usize, Error> {
    match std::env::var("RITTCALC_THREADS") {
        Err(_) => Ok(1),
        Ok(v) => {
            let n: usize = v
                .parse()
                .map_err(|_| Error::ConfigError(format!("RITTCALC_THREADS must be a positive integer, got {v:?}")))?;
            if n == 0 {
                return Err(Error::ConfigError("RITTCALC_THREADS must be positive".into()));
            }
            Ok(n)
        }
    }
}

fn run(cli: Cli) -> Result<u8, Error> {
    // all evaluation is sequential; the env var caps (and here trivially
    // satisfies) the parallelism budget, but must still be well-formed
    let _threads = check_threads_env()?;
    match cli.command {
        Command::Analyze { matrix, grid, n_max, out } => {
            if grid < 64 {
                return Err(Error::ConfigError("--grid must be at least 64".into()));
            }
            let t = io::parse_matrix(&matrix)?;
            let p = profile::profile_operator(&t, grid, n_max)?;
            emit(&out, &io::profile_to_json(&p))?;
            Ok(0)
        }
        Command::Fcalc { matrix, poly, eta, r, tol, grid, out } => {
            if tol <= 0.0 {
                return Err(Error::ConfigError("--tol must be positive".into()));
            }
            let t = io::parse_matrix(&matrix)?;
            let p = io::parse_poly(&poly)?;
            let (eta, r) = match (eta, r) {
                (Some(e), Some(rr)) => (e, rr),
                _ => {
                    let (c_tr, _) = profile::tadmor_ritt_constant(&t, grid)?;
                    let theta = (1.0 / c_tr).min(1.0).acos();
                    let (de, dr) = fcalc::default_keyhole(theta, p.degree());
                    (eta.unwrap_or(de), r.unwrap_or(dr))
                }
            };
            let (ft, err_est) = fcalc::riesz_dunford(&t, |z| p.eval(z), eta, r, tol)?;
            let oracle = p.apply(&t);
            let deviation = ft.sub(&oracle).max_abs();
            let body = format!(
                "{{\"matrix\": {}, \"diagnostics\": {{\"eta\": {eta}, \"r\": {r}, \"error_estimate\": {err_est}, \"horner_deviation\": {deviation}}}}}",
                io::matrix_to_json(&ft)
            );
            emit(&out, &body)?;
            Ok(0)
        }
        Command::Verify { suite, seed, grid, tol, full, out, format } => {
            if grid < 64 {
                return Err(Error::ConfigError("--grid must be at least 64".into()));
            }
            if tol <= 0.0 {
                return Err(Error::ConfigError("--tol must be positive".into()));
            }
            let mut params = if full {
                suites::SuiteParams::full()
            } else {
                suites::SuiteParams::default_params()
            };
            params.ring_grid = grid;
            params.quad_tol = tol;
            let reports = suites::run_suite(&suite, seed, params)?;
            emit_reports(&reports, &out, format)
        }
        Command::Besov { matrix, poly, grid, n_max, out, format } => {
            if grid < 64 {
                return Err(Error::ConfigError("--grid must be at least 64".into()));
            }
            let t = io::parse_matrix(&matrix)?;
            let f = io::parse_poly(&poly)?;
            let p = profile::profile_operator(&t, grid, n_max)?;
            let (_, report) = fcalc::besov_calculus(&t, &f, &p)?;
            emit_reports(&[report], &out, format)
        }
        Command::Sweep { matrix, seed, grid, n_max, s, out, format } => {
            if !(s > 0.0 && s < 1.0) {
                return Err(Error::ConfigError("--s must lie in (0, 1)".into()));
            }
            if grid < 64 {
                return Err(Error::ConfigError("--grid must be at least 64".into()));
            }
            let t = io::parse_matrix(&matrix)?;
            let (c_tr, _) = profile::tadmor_ritt_constant(&t, grid)?;
            let mut reports = Vec::new();
            let mut n = 4usize;
            while n <= n_max {
                for &m in &[0usize, n / 2, n] {
                    let bound = fcalc::thm2_bound(c_tr, m, n, s);
                    let search = operators::ctm_search(&t, m, n, 60, seed)?;
                    reports.push(BoundReport::check(
                        "sweep_ctm_vs_thm2",
                        search,
                        bound,
                        1e-6 * bound,
                        format!("m={m} n={n} s={s} c_tr={c_tr:.6e} seed={seed}"),
                    ));
                }
                n *= 2;
            }
            emit_reports(&reports, &out, format)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
