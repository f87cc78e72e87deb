use clap::{Parser, Subcommand};
use metric_gauntlet_cli::commands::{
    cmd_loo, cmd_perturb, cmd_score, cmd_search_ss, LooArgs, PerturbArgs, ScoreArgs, SearchArgs,
};
use metric_gauntlet_cli::error::{CliError, Result};

/// Reference-based text evaluation: BLEU, METEOR, ROUGE-L, CIDEr-D, and an
/// embedding F-score, plus the stress-test probes built on them.
#[derive(Parser)]
#[command(name = "metric-gauntlet", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Score a hypothesis corpus against references with every metric
    Score(ScoreArgs),
    /// Leave-one-out reference agreement (RvR; SvR when --hyps is given)
    Loo(LooArgs),
    /// Perturb corpus R1 and report before/after metrics and deltas
    Perturb(PerturbArgs),
    /// Search a training corpus for the one sentence that, submitted for
    /// every instance, maximizes a corpus metric
    SearchSs(SearchArgs),
}

/// `METRIC_GAUNTLET_THREADS` caps the worker count used by the search.
fn init_threads() -> Result<()> {
    match std::env::var("METRIC_GAUNTLET_THREADS") {
        Err(_) => Ok(()),
        Ok(raw) => {
            let n: usize = raw.trim().parse().map_err(|_| {
                CliError::Validation(format!(
                    "METRIC_GAUNTLET_THREADS must be a positive integer, got {raw:?}"
                ))
            })?;
            if n == 0 {
                return Err(CliError::Validation(
                    "METRIC_GAUNTLET_THREADS must be a positive integer, got 0".to_string(),
                ));
            }
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .map_err(|e| CliError::Validation(e.to_string()))
        }
    }
}

fn run(cli: &Cli) -> Result<()> {
    init_threads()?;
    match &cli.command {
        Cmd::Score(args) => cmd_score(args),
        Cmd::Loo(args) => cmd_loo(args),
        Cmd::Perturb(args) => cmd_perturb(args),
        Cmd::SearchSs(args) => cmd_search_ss(args),
    }
}

fn main() {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => {}
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
