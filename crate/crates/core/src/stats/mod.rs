//! Correlation and agreement statistics for metric-vs-human studies.

mod correlation;
mod kappa;
mod scatter;
mod study;

pub use correlation::{average_ranks, pearson, pearson_with, spearman, spearman_with, CorrelationResult, PValueMethod};
pub use kappa::{cohen_kappa, filter_raters, pairwise_kappa, FilterRule, KappaMatrix, KappaPair, RaterFilter};
pub use scatter::{scatter_export, scatter_csv, JitteredPoint, ScatterPoint, DEFAULT_SIGMA_HUMAN, DEFAULT_SIGMA_METRIC};
pub use study::{
    correlation_table_csv, human_human_correlation, item_means, metric_human_table, HumanSplit,
    MetricCorrelation,
};
