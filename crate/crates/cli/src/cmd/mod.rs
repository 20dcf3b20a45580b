pub mod baseline;
pub mod correlate;
pub mod kappa;
pub mod scatter;
pub mod score;

use std::path::Path;

use clap::ValueEnum;
use nlgm::aggregation::MetricReport;
use nlgm::corpus::RatingMatrix;
use nlgm::stats::{filter_raters, pairwise_kappa, FilterRule, PValueMethod, RaterFilter};

use crate::failure::{read, Context, Failure};

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum RuleArg {
    Mean,
    Max,
}

impl From<RuleArg> for FilterRule {
    fn from(r: RuleArg) -> Self {
        match r {
            RuleArg::Mean => FilterRule::Mean,
            RuleArg::Max => FilterRule::Max,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum PValueArg {
    /// Student's t approximation.
    T,
    /// Exact enumeration, at most 10 items.
    Permutation,
}

impl From<PValueArg> for PValueMethod {
    fn from(p: PValueArg) -> Self {
        match p {
            PValueArg::T => PValueMethod::TApprox,
            PValueArg::Permutation => PValueMethod::Permutation,
        }
    }
}

pub fn load_report(path: &Path) -> Result<MetricReport, Failure> {
    MetricReport::from_json(&read(path)?).at(path)
}

pub fn load_ratings(path: &Path) -> Result<RatingMatrix, Failure> {
    RatingMatrix::from_csv(&read(path)?).at(path)
}

pub fn filter(ratings: &RatingMatrix, threshold: f64, rule: RuleArg) -> Result<RaterFilter, Failure> {
    let kappas = pairwise_kappa(ratings)?;
    Ok(filter_raters(&kappas, threshold, rule.into())?)
}

pub fn to_json<T: serde::Serialize>(value: &T) -> Result<String, Failure> {
    serde_json::to_string_pretty(value)
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(Failure::internal)
}
