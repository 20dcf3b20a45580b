use std::fmt::Write as _;
use std::path::PathBuf;

use clap::ValueEnum;
use nlgm::seed::Seed;
use nlgm::stats::{
    correlation_table_csv, human_human_correlation, item_means, metric_human_table, CorrelationResult, HumanSplit,
    MetricCorrelation, RaterFilter,
};
use serde::Serialize;

use super::{filter, load_ratings, load_report, to_json, PValueArg, RuleArg};
use crate::failure::{emit, Failure};

#[derive(clap::Args)]
pub struct Args {
    /// Report written by `nlgm score`.
    #[arg(long)]
    report: PathBuf,
    /// Ratings CSV with header item_id,rater_id,score.
    #[arg(long)]
    ratings: PathBuf,
    /// Raters whose aggregated kappa falls below this are dropped.
    #[arg(long, default_value_t = 0.1, allow_negative_numbers = true)]
    kappa_threshold: f64,
    /// How a rater's pairwise kappas are aggregated before thresholding.
    #[arg(long, value_enum, default_value_t = RuleArg::Mean)]
    kappa_rule: RuleArg,
    /// Seed for the random rater split.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = PValueArg::T)]
    pvalue: PValueArg,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Serialize)]
struct Output {
    seed: u64,
    n_items: usize,
    raters: RaterFilter,
    metrics: Vec<MetricCorrelation>,
    human_vs_human: HumanSplit,
}

pub fn run(args: Args) -> Result<(), Failure> {
    let report = load_report(&args.report)?;
    let ratings = load_ratings(&args.ratings)?;
    let raters = filter(&ratings, args.kappa_threshold, args.kappa_rule)?;
    if !raters.removed.is_empty() {
        eprintln!(
            "removed raters with {:?} kappa below {}: {}",
            raters.rule,
            raters.threshold,
            raters.removed.join(", ")
        );
    }
    let human = item_means(&ratings, &raters.retained)?;
    let metrics = metric_human_table(&report.metric_scores(), &human, args.pvalue.into())?;
    let mut rng = Seed(args.seed).rng("rater-split");
    let split = human_human_correlation(&ratings, &raters.retained, args.pvalue.into(), &mut rng)?;

    let output = Output {
        seed: args.seed,
        n_items: human.len(),
        raters,
        metrics,
        human_vs_human: split,
    };
    let text = match args.format {
        Format::Json => to_json(&output)?,
        Format::Csv => csv(&output),
        Format::Pretty => pretty(&output),
    };
    emit(args.out.as_deref(), &text)
}

fn human_row(split: &HumanSplit) -> MetricCorrelation {
    MetricCorrelation {
        metric: "human_vs_human".into(),
        n: split.n_items,
        spearman: split.spearman,
        pearson: split.pearson,
    }
}

fn csv(output: &Output) -> String {
    let mut rows = output.metrics.clone();
    rows.push(human_row(&output.human_vs_human));
    correlation_table_csv(&rows)
}

fn pretty(output: &Output) -> String {
    let fmt = |c: Option<CorrelationResult>| match c {
        Some(c) => format!(
            "{:>7.3} ({})",
            c.coefficient,
            c.p_value.map_or_else(|| "-".into(), |p| format!("p={p:.3}"))
        ),
        None => "undefined".into(),
    };
    let mut out = String::new();
    let r = &output.raters;
    let _ = writeln!(
        out,
        "raters kept {}/{} ({:?} kappa >= {})",
        r.retained.len(),
        r.retained.len() + r.removed.len(),
        r.rule,
        r.threshold
    );
    if !r.removed.is_empty() {
        let _ = writeln!(out, "removed: {}", r.removed.join(", "));
    }
    let _ = writeln!(out, "{:<20} {:>5} {:<20} {:<20}", "metric", "n", "spearman", "pearson");
    for row in output.metrics.iter().chain([&human_row(&output.human_vs_human)]) {
        let _ = writeln!(
            out,
            "{:<20} {:>5} {:<20} {:<20}",
            row.metric,
            row.n,
            fmt(row.spearman),
            fmt(row.pearson)
        );
    }
    out
}
