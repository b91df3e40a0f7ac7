use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use divergence_core::io::JsonValue;
use divergence_core::{Error, Family, SplitStrategy};

mod commands;

#[derive(Parser, Debug)]
#[command(name = "divergence", version, about = "Entropies, divergences and their partition suprema")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Absolute tolerance for adaptive quadrature.
    #[arg(long = "quad-tol", env = "GYP_QUAD_TOL", global = true)]
    quad_tol: Option<f64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Divergence of P from R, or the entropy of P when --r is omitted.
    Compute {
        #[command(flatten)]
        pair: PairArgs,
        #[command(flatten)]
        order: OrderArgs,
    },
    /// Supremum over partitions by greedy refinement.
    Refine {
        #[command(flatten)]
        pair: RequiredPair,
        #[command(flatten)]
        order: OrderArgs,
        #[command(flatten)]
        engine: EngineArgs,
        /// Where to write the refinement trace as CSV.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Refinement estimates over a range of orders.
    Sweep {
        #[command(flatten)]
        pair: RequiredPair,
        #[arg(long, default_value = "renyi")]
        family: Family,
        /// Orders as START:STEP:END, both ends included.
        #[arg(long)]
        orders: String,
        #[command(flatten)]
        engine: EngineArgs,
    },
    /// Seeded property suites.
    Verify {
        /// Suite name, or `all`.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[command(flatten)]
        pair: PairArgs,
    },
}

#[derive(Args, Debug)]
struct PairArgs {
    #[arg(long)]
    p: Option<PathBuf>,
    #[arg(long)]
    r: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct RequiredPair {
    #[arg(long)]
    p: PathBuf,
    #[arg(long)]
    r: PathBuf,
}

#[derive(Args, Debug)]
struct OrderArgs {
    #[arg(long, default_value = "kl")]
    family: Family,
    #[arg(long)]
    order: Option<f64>,
}

#[derive(Args, Debug)]
struct EngineArgs {
    /// Relative gap tolerance against the quadrature value.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    max_cells: Option<usize>,
    #[arg(long)]
    strategy: Option<SplitStrategy>,
}

/// What a command prints and the status it exits with.
pub struct Outcome {
    pub json: JsonValue,
    pub code: u8,
}

fn exit_code(e: &Error) -> u8 {
    if e.is_numerical() {
        3
    } else {
        2
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or_default().trim_start_matches("error: ");
            eprintln!("{}", JsonValue::object().with("error", "Usage").with("message", first).to_json());
            return ExitCode::from(2);
        }
    };
    match commands::run(cli) {
        Ok(out) => {
            println!("{}", out.json.to_json());
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!(
                "{}",
                JsonValue::object().with("error", e.kind()).with("message", e.to_string()).to_json()
            );
            ExitCode::from(exit_code(&e))
        }
    }
}
