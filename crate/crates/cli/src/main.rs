//! `nlgm`: score generated text against references, correlate metrics with
//! human ratings, inspect rater agreement, and run the retrieval baseline.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 internal error.

mod cmd;
mod failure;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use failure::Failure;

#[derive(Parser)]
#[command(name = "nlgm", version, about = "Evaluation metrics for natural language generation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Score hypotheses against references and print a metric report.
    Score(cmd::score::Args),
    /// Correlate per-instance metric scores with human ratings.
    Correlate(cmd::correlate::Args),
    /// Pairwise Cohen's kappa between raters with a threshold summary.
    Kappa(cmd::kappa::Args),
    /// Generate responses by sampling training sentences with the same acts.
    Baseline(cmd::baseline::Args),
    /// Export metric-vs-human points with gaussian jitter for plotting.
    Scatter(cmd::scatter::Args),
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Score(args) => cmd::score::run(args),
        Command::Correlate(args) => cmd::correlate::run(args),
        Command::Kappa(args) => cmd::kappa::run(args),
        Command::Baseline(args) => cmd::baseline::run(args),
        Command::Scatter(args) => cmd::scatter::run(args),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { failure::USAGE } else { 0 });
        }
    };
    match std::panic::catch_unwind(|| run(cli)) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(f)) => {
            eprintln!("nlgm: {:#}", f.error);
            ExitCode::from(f.code)
        }
        Err(_) => ExitCode::from(failure::INTERNAL),
    }
}
