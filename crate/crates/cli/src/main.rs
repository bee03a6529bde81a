//! `chebsum`: Möbius-weighted Chebotarev sums, verification suites and
//! analytic diagnostics, reported as TSV.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or configuration
//! error, 3 data or classification error.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use cheb_core::moebius::Boundary;
use cheb_core::Error;

#[derive(Parser, Debug)]
#[command(name = "chebsum", version, about = "Chebotarev densities from Möbius-weighted ideal sums")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// S_C, Mertens and Q-sum series at each checkpoint.
    Sums(RunArgs),
    /// Splitting, partition, duality and class-density suites.
    Verify(RunArgs),
    /// Dickman ρ samples, Γ-bound margins, Li and Ψ(X, Y) comparisons.
    Analytic(AnalyticArgs),
    /// Prime ideals up to --xmax, or the per-class census with --ext.
    Primes(RunArgs),
    /// Exact ideal counts against c_K·X.
    CountIdeals(RunArgs),
}

#[derive(Args, Debug, Clone)]
struct RunArgs {
    /// Number field config (JSON).
    #[arg(long)]
    field: PathBuf,
    /// Relative extension config (JSON).
    #[arg(long)]
    ext: Option<PathBuf>,
    /// Largest norm considered; defaults to the last checkpoint.
    #[arg(long)]
    xmax: Option<u64>,
    /// Comma-separated ascending norm bounds.
    #[arg(long, value_delimiter = ',')]
    checkpoints: Vec<u64>,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    workers: u64,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = BoundaryArg::Inclusive)]
    boundary: BoundaryArg,
}

#[derive(Args, Debug, Clone)]
struct AnalyticArgs {
    /// Field for the Ψ(X, Y) comparison; omitted means no Ψ rows.
    #[arg(long)]
    field: Option<PathBuf>,
    /// X for Ψ(X, Y).
    #[arg(long, default_value_t = 100_000)]
    xmax: u64,
    /// Y for Ψ(X, Y); defaults to ⌊√X⌋.
    #[arg(long)]
    y: Option<u64>,
    /// Extra β values at which to report ρ.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    beta: Vec<f64>,
    /// Points at which to report Li(x).
    #[arg(long, value_delimiter = ',')]
    checkpoints: Vec<u64>,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    workers: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum BoundaryArg {
    Inclusive,
    Exclusive,
}

impl From<BoundaryArg> for Boundary {
    fn from(b: BoundaryArg) -> Self {
        match b {
            BoundaryArg::Inclusive => Boundary::Inclusive,
            BoundaryArg::Exclusive => Boundary::Exclusive,
        }
    }
}

/// Why a command stopped.
#[derive(Debug)]
pub enum Failure {
    /// A verification suite found counterexamples.
    Verification,
    Usage(String),
    Data(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidArgument(_)
            | Error::Overflow(_)
            | Error::OutOfRange(_)
            | Error::Config(_) => Failure::Usage(e.to_string()),
            Error::Unavailable(_) | Error::IndexDivisor(_) | Error::Unclassifiable { .. } => {
                Failure::Data(e.to_string())
            }
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("CHEB_SEED_LOG")).init();
    let cli = Cli::parse();
    let workers = match &cli.command {
        Command::Analytic(a) => a.workers,
        Command::Sums(a) | Command::Verify(a) | Command::Primes(a) | Command::CountIdeals(a) => {
            a.workers
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(workers as usize)
        .build()
    {
        Ok(pool) => pool,
        Err(e) => {
            eprintln!("error: cannot start {workers} workers: {e}");
            return ExitCode::from(2);
        }
    };
    let result = pool.install(|| match cli.command {
        Command::Sums(a) => commands::sums(&a),
        Command::Verify(a) => commands::verify(&a),
        Command::Analytic(a) => commands::analytic(&a),
        Command::Primes(a) => commands::primes(&a),
        Command::CountIdeals(a) => commands::count_ideals(&a),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Data(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
