use std::path::PathBuf;

use nlgm::aggregation::Metric;
use nlgm::seed::Seed;
use nlgm::stats::{item_means, scatter_csv, scatter_export, ScatterPoint, DEFAULT_SIGMA_HUMAN, DEFAULT_SIGMA_METRIC};

use super::{filter, load_ratings, load_report, RuleArg};
use crate::failure::{emit, Failure};

#[derive(clap::Args)]
pub struct Args {
    /// Report written by `nlgm score`.
    #[arg(long)]
    report: PathBuf,
    /// Ratings CSV with header item_id,rater_id,score.
    #[arg(long)]
    ratings: PathBuf,
    /// Metric to plot against the human mean.
    #[arg(long)]
    metric: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_SIGMA_HUMAN)]
    sigma_human: f64,
    #[arg(long, default_value_t = DEFAULT_SIGMA_METRIC)]
    sigma_metric: f64,
    #[arg(long, default_value_t = 0.1, allow_negative_numbers = true)]
    kappa_threshold: f64,
    #[arg(long, value_enum, default_value_t = RuleArg::Mean)]
    kappa_rule: RuleArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn run(args: Args) -> Result<(), Failure> {
    let metric: Metric = args.metric.parse()?;
    let report = load_report(&args.report)?;
    let mut scores = report.metric_scores();
    let Some(scores) = scores.remove(metric.name()) else {
        return Err(Failure::usage(format!("metric {metric} is not in the report")));
    };
    let ratings = load_ratings(&args.ratings)?;
    let raters = filter(&ratings, args.kappa_threshold, args.kappa_rule)?;
    let human = item_means(&ratings, &raters.retained)?;

    let points: Vec<ScatterPoint> = human
        .iter()
        .filter_map(|(item, &h)| {
            scores.get(item).copied().flatten().map(|m| ScatterPoint {
                item_id: item.clone(),
                human: h,
                metric: m,
            })
        })
        .collect();
    if points.is_empty() {
        return Err(Failure::from(nlgm::Error::TooFewObservations { needed: 1, got: 0 })
            .context("no item has both a rating and a defined metric score"));
    }
    let mut rng = Seed(args.seed).rng("scatter");
    let jittered = scatter_export(&points, args.sigma_human, args.sigma_metric, &mut rng)?;
    emit(args.out.as_deref(), &scatter_csv(&jittered))
}
