//! `graphbandit`: classify feedback graphs, run Exp3.G experiments, and
//! check the partial-monitoring encoding.
//!
//! Text output is one `key=value` per line. Validation errors exit with
//! status 2.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "graphbandit", version, about = "Online learning with feedback graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Observability class of a graph.
    Classify(GraphArgs),
    /// Class, independence number, weak domination number and predicted rate.
    Profile {
        #[command(flatten)]
        graph: GraphArgs,
        /// Horizon for the predicted regret rate.
        #[arg(long = "T", default_value_t = 10_000)]
        horizon: u64,
    },
    /// Play one game and report its regret.
    Run {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        game: GameArgs,
        #[arg(long = "T")]
        horizon: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Restart the learner on doubling epochs (informed mode only).
        #[arg(long)]
        doubling: bool,
        /// Write per-round records (t,action,loss,observed) as CSV.
        #[arg(long)]
        transcript: Option<PathBuf>,
    },
    /// Repeated games over a grid of horizons; writes the results CSV.
    Sweep {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        game: GameArgs,
        /// Comma-separated, strictly increasing horizons.
        #[arg(long = "T", value_delimiter = ',', required = true)]
        horizons: Vec<usize>,
        #[arg(long, default_value_t = 32)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Results CSV path; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Lower-bound demonstrations: measured regret next to the rate formula.
    Lowerbound {
        /// Which construction; all three when absent.
        #[arg(long, value_parser = ["thm4", "thm8", "thm7"])]
        env: Option<String>,
        #[arg(long, default_value_t = 8)]
        k: usize,
        #[arg(long = "T", default_value_t = 4096)]
        horizon: usize,
        #[arg(long, default_value_t = 8)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Encode as a partial-monitoring game and check observability.
    PmCheck {
        #[command(flatten)]
        graph: GraphArgs,
        /// Directory to write L.csv and H.csv into.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
}

/// Exactly one of a graph file or `--catalog` with `--k`.
#[derive(Debug, Args)]
struct GraphArgs {
    /// Graph file: first line K, then one 1-based edge `u v` per line.
    file: Option<PathBuf>,
    /// Catalog graph: full, bandit, loopless_clique, apple_tasting,
    /// revealing_action, clique_minus, loopy_star.
    #[arg(long)]
    catalog: Option<String>,
    /// Number of vertices for a catalog graph.
    #[arg(long)]
    k: Option<usize>,
}

#[derive(Debug, Args)]
struct GameArgs {
    #[arg(long, default_value = "exp3g", value_parser = ["exp3g", "hedge", "uniform", "fixed"])]
    learner: String,
    /// Arm played by `--learner fixed` (1-based).
    #[arg(long, default_value_t = 1)]
    arm: usize,
    #[arg(
        long,
        default_value = "auto",
        value_parser = ["auto", "strong", "weak", "loopless-clique", "uninformed", "manual"]
    )]
    preset: String,
    #[arg(long)]
    eta: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long, default_value = "fixed", value_parser = ["fixed", "informed", "uninformed"])]
    mode: String,
    #[arg(long, value_parser = ["table", "bernoulli", "thm4", "thm5", "thm8", "thm7"])]
    env: String,
    /// Hidden parameter: 0/1 for thm4, 1/-1 for thm8 and thm7. Averaged
    /// over both values when absent.
    #[arg(long, allow_hyphen_values = true)]
    chi: Option<i8>,
    /// Comma-separated Bernoulli means.
    #[arg(long, value_delimiter = ',')]
    mu: Option<Vec<f64>>,
    /// Gap override for thm5, thm8 and thm7.
    #[arg(long)]
    eps: Option<f64>,
    /// Loss table CSV for `--env table`.
    #[arg(long)]
    table: Option<PathBuf>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match commands::dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
