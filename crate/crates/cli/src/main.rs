//! `boltzlab` — occupation-statistics laboratory on the command line.
//!
//! Subcommands: `count`, `stirling`, `entropy`, `solve`, `verify`,
//! `figure1`, `slope`, `benford`. Exit codes: 0 success, 1 domain or
//! validation error (including a failed `verify` check), 2 numerical
//! non-convergence. All logarithms are natural.

mod commands;
mod output;
mod parse;

use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use output::OutputFormat;

/// Default seed for every sampled operation when `--seed` is omitted.
const DEFAULT_SEED: u64 = 42;

/// Environment variable overriding the per-command default output format.
const FORMAT_ENV: &str = "BOLTZLAB_FORMAT";

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(boltzlab::Error),
}

impl From<boltzlab::Error> for CliError {
    fn from(e: boltzlab::Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Core(e) => {
                if e.is_numerical() {
                    2
                } else {
                    1
                }
            }
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Exclusion,
    Bosonic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OccupationKindArg {
    Probability,
    Exclusion,
    Bosonic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BenfordModeArg {
    Analytic,
    Sampled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VerifyCheck {
    Enumeration,
    Grid,
    Perturbation,
}

#[derive(Debug, Args)]
pub struct CountArgs {
    /// Number of states N (>= 1).
    #[arg(long)]
    pub states: u64,
    /// Number of particles P.
    #[arg(long)]
    pub particles: u64,
    /// Counting statistics.
    #[arg(long, value_enum)]
    pub kind: KindArg,
}

#[derive(Debug, Args)]
pub struct EntropyArgs {
    /// Comma-separated values, or @path with one value per line.
    #[arg(long)]
    pub values: String,
    /// Domain of the values.
    #[arg(long, value_enum)]
    pub kind: OccupationKindArg,
    /// Report the low-occupation deviation instead of the entropy.
    #[arg(long)]
    pub deviation: bool,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// Comma-separated energies, or @path with one energy per line.
    #[arg(long)]
    pub levels: String,
    /// Occupation statistics to solve.
    #[arg(long, value_enum)]
    pub kind: KindArg,
    /// Target total energy sum(n_i E_i).
    #[arg(long, allow_negative_numbers = true)]
    pub energy: f64,
    /// Fix alpha and solve only for beta (alpha = 0 is Planck mode).
    #[arg(long, allow_negative_numbers = true, conflicts_with = "particles")]
    pub alpha: Option<f64>,
    /// Target total particle number sum(n_i); solves for alpha and beta.
    #[arg(long, allow_negative_numbers = true)]
    pub particles: Option<f64>,
    /// Interpret the targets as per-state means (multiplies them by N).
    #[arg(long)]
    pub per_state: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Which oracle check to run.
    #[arg(long, value_enum)]
    pub check: VerifyCheck,
    /// Enumeration: largest N to sweep.
    #[arg(long, default_value_t = 6)]
    pub max_states: u64,
    /// Enumeration: largest P to sweep.
    #[arg(long, default_value_t = 6)]
    pub max_particles: u64,
    /// Grid/perturbation: energy levels.
    #[arg(long)]
    pub levels: Option<String>,
    /// Grid/perturbation: occupation statistics.
    #[arg(long, value_enum, default_value_t = KindArg::Bosonic)]
    pub kind: KindArg,
    /// Grid/perturbation: particle-number multiplier of the reference law.
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    pub alpha: f64,
    /// Grid/perturbation: energy multiplier of the reference law.
    #[arg(long, allow_negative_numbers = true, default_value_t = 1.0)]
    pub beta: f64,
    /// Grid: spacing of the occupation grid.
    #[arg(long, default_value_t = 0.01)]
    pub step: f64,
    /// Perturbation: number of random exchanges.
    #[arg(long, default_value_t = 1000)]
    pub trials: u32,
    /// Perturbation: largest exchange amplitude.
    #[arg(long, default_value_t = 0.01)]
    pub magnitude: f64,
}

#[derive(Debug, Args)]
pub struct Figure1Args {
    /// Smallest phi on the log-spaced grid.
    #[arg(long)]
    pub min: f64,
    /// Largest phi on the log-spaced grid.
    #[arg(long)]
    pub max: f64,
    /// Number of grid points.
    #[arg(long)]
    pub points: usize,
}

#[derive(Debug, Args)]
pub struct SlopeArgs {
    /// Where to evaluate the log-log slope.
    #[arg(long)]
    pub phi: f64,
    /// Multiplicative stencil of the central difference, in (1, 1.1].
    #[arg(long, default_value_t = 1.01)]
    pub ratio: f64,
}

#[derive(Debug, Args)]
pub struct BenfordArgs {
    /// Number of whole decades in the support [1, 10^decades].
    #[arg(long, default_value_t = 1)]
    pub decades: u32,
    /// Analytic digit law or seeded sampling.
    #[arg(long, value_enum, default_value_t = BenfordModeArg::Analytic)]
    pub mode: BenfordModeArg,
    /// Draw count in sampled mode (>= 10000).
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: u64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Count the microstates of an ensemble.
    Count(CountArgs),
    /// Stirling entropy and its measured error against ln W.
    Stirling(CountArgs),
    /// Evaluate an entropy functional on explicit values.
    Entropy(EntropyArgs),
    /// Solve the Lagrange multipliers for given constraint targets.
    Solve(SolveArgs),
    /// Run a brute-force oracle check and report pass/fail.
    Verify(VerifyArgs),
    /// Tabulate the log-log occupation curve.
    Figure1(Figure1Args),
    /// Finite-difference vs analytic log-log slope at one phi.
    Slope(SlopeArgs),
    /// Leading-digit frequencies of the 1/x density.
    Benford(BenfordArgs),
}

#[derive(Debug, Parser)]
#[command(name = "boltzlab", version, about = "Occupation-statistics laboratory")]
struct Cli {
    /// Output format; defaults per command (see README), or the
    /// BOLTZLAB_FORMAT environment variable when set.
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,
    /// Write the output to this file instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Seed for sampled operations (default 42).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Suppress the provenance banner in plain/csv output.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

fn default_format(command: &Command) -> OutputFormat {
    match command {
        Command::Solve(_) | Command::Verify(_) => OutputFormat::Json,
        Command::Figure1(_) | Command::Benford(_) => OutputFormat::Csv,
        _ => OutputFormat::Plain,
    }
}

fn resolve_format(cli: &Cli) -> Result<OutputFormat, CliError> {
    if let Some(format) = cli.format {
        return Ok(format);
    }
    match std::env::var(FORMAT_ENV) {
        Ok(value) => OutputFormat::parse_env(&value).ok_or_else(|| {
            CliError::Usage(format!(
                "{FORMAT_ENV} must be one of csv, json, plain; got `{value}`"
            ))
        }),
        Err(_) => Ok(default_format(&cli.command)),
    }
}

fn banner(seed: u64) -> String {
    let echo: Vec<String> = std::env::args().skip(1).collect();
    format!(
        "# boltzlab {}\n# command: {}\n# seed: {}\n# logarithms: natural (nats)\n",
        env!("CARGO_PKG_VERSION"),
        echo.join(" "),
        seed
    )
}

fn run(cli: &Cli) -> Result<(String, bool), CliError> {
    let format = resolve_format(cli)?;
    let seed = cli.seed.unwrap_or(DEFAULT_SEED);
    let (content, passed) = match &cli.command {
        Command::Count(args) => commands::count(args, format)?,
        Command::Stirling(args) => commands::stirling(args, format)?,
        Command::Entropy(args) => commands::entropy(args, format)?,
        Command::Solve(args) => commands::solve(args, format)?,
        Command::Verify(args) => commands::verify(args, format, seed)?,
        Command::Figure1(args) => commands::figure1(args, format)?,
        Command::Slope(args) => commands::slope(args, format)?,
        Command::Benford(args) => commands::benford(args, format, seed)?,
    };
    let rendered = if format == OutputFormat::Json || cli.quiet {
        content
    } else {
        format!("{}{}", banner(seed), content)
    };
    Ok((rendered, passed))
}

fn emit(cli: &Cli, rendered: &str) -> Result<(), CliError> {
    match &cli.output {
        Some(path) => std::fs::write(path, rendered)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(rendered.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::Usage(format!("cannot write to stdout: {e}")))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = e.print();
                    ExitCode::SUCCESS
                }
                _ => {
                    let _ = e.print();
                    ExitCode::from(1)
                }
            };
        }
    };
    match run(&cli) {
        Ok((rendered, passed)) => {
            if let Err(e) = emit(&cli, &rendered) {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
