//! `pbes`: check, transform and instantiate parameterised Boolean equation
//! systems, and solve the resulting parity games.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use pbes::buffer::Property;
use pbes::game::Convention;

#[derive(Parser, Debug)]
#[command(name = "pbes", version, about)]
struct Cli {
    /// More logging on standard error (repeat for more).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse and validate a system and report its normal forms.
    Check { input: PathBuf },
    /// Transform a BQNF system into a parameterised parity game.
    Transform {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Print the dependency matrix of the transition groups.
    Matrix { input: PathBuf },
    /// Explore the parity game of a system and write it in PGSolver format.
    Instantiate {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        explore: ExploreArgs,
        #[arg(long, value_enum, default_value_t = Conv::Max)]
        convention: Conv,
        /// Print exploration statistics as key=value lines.
        #[arg(long)]
        stats: bool,
    },
    /// Solve a system (`.pbes`) or a game (PGSolver) and verify the result.
    Solve {
        input: PathBuf,
        #[command(flatten)]
        explore: ExploreArgs,
        /// Priority convention of a PGSolver input.
        #[arg(long, value_enum, default_value_t = Conv::Max)]
        convention: Conv,
        /// Print the winner's strategy on its winning region.
        #[arg(long)]
        strategy: bool,
    },
    /// Generate the sequential-buffer benchmark system.
    GenBuffer {
        n: usize,
        #[arg(value_parser = parse_property)]
        property: Property,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Cross-check transformation, instantiation and solving against a
    /// brute-force oracle.
    Oracle {
        input: PathBuf,
        /// Maximum number of equations or nodes per instantiation.
        #[arg(long, default_value_t = 10_000)]
        budget: usize,
    },
}

#[derive(Args, Debug, Clone)]
struct ExploreArgs {
    /// Compute every successor directly instead of through the group cache.
    #[arg(long)]
    no_cache: bool,
    /// Drop edges to true from conjunctive and to false from disjunctive nodes.
    #[arg(long)]
    prune_constant_edges: bool,
    /// Leave node labels out.
    #[arg(long)]
    no_labels: bool,
    /// Fail once the game has more nodes than this.
    #[arg(long)]
    max_nodes: Option<usize>,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum Conv {
    Min,
    Max,
}

impl From<Conv> for Convention {
    fn from(c: Conv) -> Convention {
        match c {
            Conv::Min => Convention::Min,
            Conv::Max => Convention::Max,
        }
    }
}

fn parse_property(s: &str) -> Result<Property, String> {
    s.parse()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
