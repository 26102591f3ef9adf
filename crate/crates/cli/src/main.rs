//! `gldpc`: minimum-distance analysis of GLDPC ensembles from JSON spec files.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use commands::CliError;

/// Environment variable capping the worker threads.
const THREADS_ENV: &str = "GLDPC_THREADS";

#[derive(Parser, Debug)]
#[command(name = "gldpc", version, about = "Minimum-distance analysis of irregular GLDPC code ensembles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the derived parameters, critical ratio and limit probabilities as JSON.
    Analyze {
        spec: PathBuf,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep the node-perspective share of the first of two check-node types.
    Sweep {
        spec: PathBuf,
        /// Grid `start:stop:step`, e.g. `0:1:0.05`.
        #[arg(long)]
        gamma_grid: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Monte Carlo statistics of small minimum distances.
    Sample {
        spec: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        trials: u64,
        /// Relative threshold: counts codes with d_min <= floor(alpha N).
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Ensemble to sample when the spec file describes both.
        #[arg(long, value_enum)]
        ensemble: Option<EnsembleChoice>,
        /// Largest code dimension searched exhaustively.
        #[arg(long, default_value_t = gldpc_core::sampler::DEFAULT_K_LIMIT)]
        k_limit: usize,
    },
    /// Exact weight-2j coefficients against their large-N limit.
    Lemma1 {
        spec: PathBuf,
        #[arg(long)]
        j: usize,
        /// Comma-separated block lengths.
        #[arg(long, value_delimiter = ',', required = true)]
        n_list: Vec<usize>,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum EnsembleChoice {
    E1,
    E2,
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| CliError::Validation(format!("{THREADS_ENV} must be a positive integer, got '{raw}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Validation(format!("cannot configure {threads} threads: {e}")))
}

fn run(cli: Cli) -> Result<(), CliError> {
    configure_threads()?;
    match cli.command {
        Command::Analyze { spec, out } => commands::analyze(&spec, out.as_deref()),
        Command::Sweep { spec, gamma_grid, out } => commands::sweep(&spec, &gamma_grid, &out),
        Command::Sample {
            spec,
            n,
            trials,
            alpha,
            seed,
            out,
            ensemble,
            k_limit,
        } => commands::sample(&spec, n, trials, alpha, seed, &out, ensemble, k_limit),
        Command::Lemma1 { spec, j, n_list, out } => commands::lemma1(&spec, j, &n_list, &out),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
