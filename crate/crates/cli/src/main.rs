use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use generank_cli::{analyze, exit_with, run, validate, CommonArgs, RunArgs};

/// Evolutionary-game ranking engine for tabular decision problems.
#[derive(Parser)]
#[command(name = "generank", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the evolutionary simulation and write trace/summary outputs.
    Run {
        /// Input CSV (overrides the config's data path).
        #[arg(long)]
        data: Option<PathBuf>,
        /// Run configuration, YAML or JSON.
        #[arg(long)]
        config: PathBuf,
        /// Write the long-format iteration trace CSV here.
        #[arg(long = "out-trace")]
        out_trace: Option<PathBuf>,
        /// Write the summary JSON here (stdout when omitted).
        #[arg(long = "out-summary")]
        out_summary: Option<PathBuf>,
        /// Override the iteration budget.
        #[arg(long)]
        iterations: Option<usize>,
    },
    /// Print static diagnostics (population, kinship, sign scenarios).
    Analyze {
        #[arg(long)]
        data: Option<PathBuf>,
        #[arg(long)]
        config: PathBuf,
    },
    /// Check the config and data without simulating.
    Validate {
        #[arg(long)]
        data: Option<PathBuf>,
        #[arg(long)]
        config: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Run {
            data,
            config,
            out_trace,
            out_summary,
            iterations,
        } => exit_with(run(&RunArgs {
            common: CommonArgs { data, config },
            out_trace,
            out_summary,
            iterations,
        })),
        Command::Analyze { data, config } => exit_with(analyze(&CommonArgs { data, config })),
        Command::Validate { data, config } => exit_with(validate(&CommonArgs { data, config })),
    };
    ExitCode::from(code as u8)
}
