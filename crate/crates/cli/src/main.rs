mod bench;
mod commands;
mod config;
mod dot;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use postman_core::Error;

#[derive(Parser, Debug)]
#[command(name = "postman", version, about = "Route inspection problems compiled to QUBO")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compile, sample, decode and report a route.
    Solve {
        input: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Write the QUBO text file and its variable registry.
    ExportQubo {
        input: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Exact ground truth for one instance or every instance in a directory.
    Oracle {
        input: PathBuf,
        #[command(flatten)]
        run: RunArgs,
        /// Node limit of the exact walk search.
        #[arg(long)]
        node_budget: Option<u64>,
    },
    /// Check a route file against an instance.
    Validate {
        input: PathBuf,
        route: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Run solvers over a suite directory and write a CSV table.
    Bench {
        suite: PathBuf,
        #[command(flatten)]
        run: RunArgs,
        /// Comma-separated solver names.
        #[arg(long, value_delimiter = ',')]
        solvers: Option<Vec<String>>,
        /// Comma-separated seeds.
        #[arg(long, value_delimiter = ',')]
        seeds: Option<Vec<u64>>,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PipelineKind {
    Pairing,
    General,
}

#[derive(Args, Debug, Clone, Default)]
pub struct RunArgs {
    /// Defaults to `pairing` for graph files and `general` for spec files.
    #[arg(long, value_enum)]
    pipeline: Option<PipelineKind>,
    /// brute, greedy, sa, tabu, sa+greedy or tabu+greedy.
    #[arg(long)]
    solver: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    i_max: Option<usize>,
    /// Output directory (output file for `bench`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the graph and route in DOT format.
    #[arg(long)]
    dot: bool,
    /// Compile a QUBO even when an Euler trail solves the instance directly.
    #[arg(long)]
    force_qubo: bool,
    #[arg(long)]
    max_retunes: Option<usize>,
    /// Record wall-clock times (outputs then differ between runs).
    #[arg(long)]
    timing: bool,
    /// JSON run configuration; command-line flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    reads: Option<usize>,
    #[arg(long)]
    sweeps: Option<usize>,
    #[arg(long)]
    restarts: Option<usize>,
    #[arg(long)]
    p_one_edge: Option<f64>,
    #[arg(long)]
    p_adjacency: Option<f64>,
    #[arg(long)]
    p_required: Option<f64>,
    #[arg(long)]
    p_turn: Option<f64>,
    #[arg(long)]
    p_hierarchy: Option<f64>,
    #[arg(long)]
    p_collision: Option<f64>,
    #[arg(long)]
    p_capacity: Option<f64>,
    #[arg(long)]
    p_pairing: Option<f64>,
}

/// Failure classes, one per process exit code.
#[derive(Debug)]
pub enum Failure {
    Input(String),
    NoValidSolution(String),
    TooLarge(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 1,
            Failure::NoValidSolution(_) => 2,
            Failure::TooLarge(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::NoValidSolution(m) | Failure::TooLarge(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NoValidSolution { .. } => Failure::NoValidSolution(e.to_string()),
            Error::TooLarge { .. } | Error::SearchBudgetExceeded(_) | Error::TooManyOddVertices(_) => {
                Failure::TooLarge(e.to_string())
            }
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve { input, run } => commands::solve(&input, &run),
        Command::ExportQubo { input, run } => commands::export_qubo(&input, &run),
        Command::Oracle { input, run, node_budget } => commands::oracle(&input, &run, node_budget),
        Command::Validate { input, route, run } => commands::validate(&input, &route, &run),
        Command::Bench { suite, run, solvers, seeds } => bench::bench(&suite, &run, solvers, seeds),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
