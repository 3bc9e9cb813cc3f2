mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

/// Validation errors exit with 1, I/O errors with 2.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Io { .. } => 2,
        }
    }
}

/// Choice-and-refusal prisoner's dilemma under limited attention.
#[derive(Debug, Parser)]
#[command(name = "scarcity", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one realization and print a CSV row.
    Run(RunArgs),
    /// Sweep the (memory, defectors) lattice and write surface CSVs.
    Sweep(SweepArgs),
    /// Extract attention boundaries and cooperation areas from surface CSVs.
    Boundary(BoundaryArgs),
    /// Print closed-form expectations.
    Oracle(OracleArgs),
}

#[derive(Debug, Args)]
struct RunArgs {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    defectors: u32,
    #[arg(long)]
    memory: u32,
    #[arg(long)]
    tau: f64,
    #[arg(long)]
    strategy: String,
    #[arg(long)]
    seed: u64,
    /// T,R,P,S
    #[arg(long, default_value = "5,3,1,0")]
    payoffs: String,
    /// Print the column header before the row.
    #[arg(long)]
    header: bool,
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// Flat `key = value` config file (a previous manifest works too).
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n: Option<u32>,
    /// Comma-separated tau values.
    #[arg(long)]
    tau: Option<String>,
    /// Comma-separated strategies, e.g. FOC,FOD,FAR,FEQ,FMJ.
    #[arg(long)]
    strategies: Option<String>,
    /// Realizations per cell.
    #[arg(long)]
    reps: Option<u32>,
    #[arg(long)]
    seed: Option<u64>,
    /// Attention capacity grid: `0,5,10` or `start:stop:step`.
    #[arg(long)]
    memory_grid: Option<String>,
    /// Defector count grid: `0,5,10` or `start:stop:step`.
    #[arg(long)]
    defector_grid: Option<String>,
    /// Step for axes without an explicit grid (default 1).
    #[arg(long)]
    step: Option<u32>,
    /// T,R,P,S
    #[arg(long)]
    payoffs: Option<String>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct BoundaryArgs {
    /// Surface CSV files produced by `sweep`.
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    #[arg(long)]
    out: PathBuf,
    /// Consecutive positive points required to accept a crossing.
    #[arg(long, default_value_t = scarcity_core::analysis::DEFAULT_PERSISTENCE)]
    persistence: usize,
}

#[derive(Debug, Args)]
struct OracleArgs {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    defectors: u32,
    #[arg(long, conflicts_with = "rounds", required_unless_present = "rounds")]
    tau: Option<f64>,
    /// Total rounds instead of tau.
    #[arg(long)]
    rounds: Option<u64>,
    /// T,R,P,S
    #[arg(long, default_value = "5,3,1,0")]
    payoffs: String,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Run(args) => commands::run(args),
        Command::Sweep(args) => commands::sweep(args),
        Command::Boundary(args) => commands::boundary(args),
        Command::Oracle(args) => commands::oracle(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
