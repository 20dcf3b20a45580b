use std::fmt::Write as _;
use std::path::PathBuf;

use nlgm::stats::{pairwise_kappa, KappaPair};
use serde::Serialize;

use super::{load_ratings, to_json};
use crate::failure::{emit, Failure};

#[derive(clap::Args)]
pub struct Args {
    /// Ratings CSV with header item_id,rater_id,score.
    #[arg(long)]
    ratings: PathBuf,
    /// Thresholds for the summary; a pair counts when its kappa is strictly above.
    #[arg(long, value_delimiter = ',', default_value = "0.1,0.2,0.3,0.4,0.5,0.6", allow_negative_numbers = true)]
    buckets: Vec<f64>,
    /// Print a plain-text table instead of JSON.
    #[arg(long)]
    pretty: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
pub struct Bucket {
    pub threshold: f64,
    pub pairs: usize,
    pub total: usize,
    pub percent: f64,
}

#[derive(Serialize)]
struct Output {
    raters: Vec<String>,
    pairs: Vec<KappaPair>,
    undefined_pairs: usize,
    buckets: Vec<Bucket>,
}

/// Count and share of pairs with kappa strictly above each threshold. Pairs
/// with undefined kappa count toward the total but never above a threshold.
pub fn buckets(pairs: &[KappaPair], thresholds: &[f64]) -> Vec<Bucket> {
    thresholds
        .iter()
        .map(|&t| {
            let above = pairs.iter().filter(|p| p.kappa.is_some_and(|k| k > t)).count();
            Bucket {
                threshold: t,
                pairs: above,
                total: pairs.len(),
                percent: 100.0 * above as f64 / pairs.len() as f64,
            }
        })
        .collect()
}

pub fn run(args: Args) -> Result<(), Failure> {
    if let Some(bad) = args.buckets.iter().find(|t| !t.is_finite()) {
        return Err(Failure::usage(format!("bucket threshold {bad} is not finite")));
    }
    let ratings = load_ratings(&args.ratings)?;
    let matrix = pairwise_kappa(&ratings)?;
    let output = Output {
        undefined_pairs: matrix.pairs.iter().filter(|p| p.kappa.is_none()).count(),
        buckets: buckets(&matrix.pairs, &args.buckets),
        raters: matrix.raters,
        pairs: matrix.pairs,
    };
    let text = if args.pretty { pretty(&output) } else { to_json(&output)? };
    emit(args.out.as_deref(), &text)
}

fn pretty(output: &Output) -> String {
    let mut out = format!("{} raters, {} pairs\n", output.raters.len(), output.pairs.len());
    let _ = writeln!(out, "{:<8} {:>9} {:>8}", "kappa", "# pairs", "% pairs");
    for b in &output.buckets {
        let _ = writeln!(
            out,
            "> {:<6} {:>9} {:>7.1}%",
            b.threshold,
            format!("{}/{}", b.pairs, b.total),
            b.percent
        );
    }
    out
}
