use std::fmt::Write as _;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub const DEFAULT_SIGMA_HUMAN: f64 = 0.1;
pub const DEFAULT_SIGMA_METRIC: f64 = 0.02;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScatterPoint {
    pub item_id: String,
    pub human: f64,
    pub metric: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JitteredPoint {
    pub item_id: String,
    pub human: f64,
    pub metric: f64,
    pub human_jit: f64,
    pub metric_jit: f64,
}

/// Adds independent gaussian noise to both coordinates of every point so
/// overlapping points separate in a plot.
pub fn scatter_export<R: Rng + ?Sized>(
    points: &[ScatterPoint],
    sigma_human: f64,
    sigma_metric: f64,
    rng: &mut R,
) -> Result<Vec<JitteredPoint>> {
    for sigma in [sigma_human, sigma_metric] {
        if !(sigma >= 0.0 && sigma.is_finite()) {
            return Err(Error::InvalidConfig(format!("jitter sigma {sigma} must be >= 0")));
        }
    }
    Ok(points
        .iter()
        .map(|p| {
            let zh: f64 = rng.sample(StandardNormal);
            let zm: f64 = rng.sample(StandardNormal);
            JitteredPoint {
                item_id: p.item_id.clone(),
                human: p.human,
                metric: p.metric,
                human_jit: p.human + sigma_human * zh,
                metric_jit: p.metric + sigma_metric * zm,
            }
        })
        .collect())
}

/// CSV with columns `item_id,human,metric,human_jit,metric_jit`.
pub fn scatter_csv(points: &[JitteredPoint]) -> String {
    let mut out = String::from("item_id,human,metric,human_jit,metric_jit\n");
    for p in points {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            p.item_id, p.human, p.metric, p.human_jit, p.metric_jit
        );
    }
    out
}
