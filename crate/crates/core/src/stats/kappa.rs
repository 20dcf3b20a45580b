use std::collections::HashMap;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::corpus::RatingMatrix;
use crate::{Error, Result};

/// Cohen's kappa for two raters over unordered categories.
pub fn cohen_kappa<T: Eq + Hash>(a: &[T], b: &[T]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch(a.len(), b.len()));
    }
    if a.is_empty() {
        return Err(Error::TooFewObservations { needed: 1, got: 0 });
    }
    let n = a.len() as f64;
    let agree = a.iter().zip(b).filter(|(x, y)| x == y).count() as f64;
    let p_o = agree / n;

    // Categories in first-appearance order so the float sum is reproducible.
    let mut index: HashMap<&T, usize> = HashMap::new();
    let mut marginals: Vec<(usize, usize)> = Vec::new();
    for (x, side) in a.iter().map(|x| (x, 0)).chain(b.iter().map(|y| (y, 1))) {
        let k = *index.entry(x).or_insert_with(|| {
            marginals.push((0, 0));
            marginals.len() - 1
        });
        if side == 0 {
            marginals[k].0 += 1;
        } else {
            marginals[k].1 += 1;
        }
    }
    let p_e: f64 = marginals
        .iter()
        .map(|&(ca, cb)| (ca as f64 / n) * (cb as f64 / n))
        .sum();
    if (1.0 - p_e).abs() < 1e-15 {
        // Both raters used one and the same category throughout.
        return Ok(1.0);
    }
    Ok(((p_o - p_e) / (1.0 - p_e)).clamp(-1.0, 1.0))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KappaPair {
    pub a: String,
    pub b: String,
    /// Items rated by both.
    pub shared_items: usize,
    /// `None` when fewer than two items are shared.
    pub kappa: Option<f64>,
}

/// Symmetric pairwise kappas; one entry per unordered rater pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KappaMatrix {
    pub raters: Vec<String>,
    pub pairs: Vec<KappaPair>,
}

impl KappaMatrix {
    pub fn get(&self, a: &str, b: &str) -> Option<f64> {
        self.pairs
            .iter()
            .find(|p| (p.a == a && p.b == b) || (p.a == b && p.b == a))
            .and_then(|p| p.kappa)
    }

    /// Defined kappas involving `rater`.
    pub fn kappas_of<'a>(&'a self, rater: &'a str) -> impl Iterator<Item = f64> + 'a {
        self.pairs
            .iter()
            .filter(move |p| p.a == rater || p.b == rater)
            .filter_map(|p| p.kappa)
    }
}

pub fn pairwise_kappa(ratings: &RatingMatrix) -> Result<KappaMatrix> {
    let raters = ratings.raters();
    if raters.len() < 2 {
        return Err(Error::TooFewRaters(raters.len()));
    }
    let columns: Vec<_> = (0..raters.len()).map(|r| ratings.rater_column(r)).collect();
    let mut pairs = Vec::new();
    for i in 0..raters.len() {
        for j in i + 1..raters.len() {
            let (xs, ys): (Vec<u8>, Vec<u8>) = columns[i]
                .iter()
                .filter_map(|(item, &s)| columns[j].get(item).map(|&t| (s, t)))
                .unzip();
            let kappa = if xs.len() >= 2 {
                Some(cohen_kappa(&xs, &ys)?)
            } else {
                None
            };
            pairs.push(KappaPair {
                a: raters[i].clone(),
                b: raters[j].clone(),
                shared_items: xs.len(),
                kappa,
            });
        }
    }
    Ok(KappaMatrix {
        raters: raters.to_vec(),
        pairs,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FilterRule {
    /// Mean of the rater's pairwise kappas.
    #[default]
    Mean,
    /// Best pairwise kappa of the rater.
    Max,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RaterFilter {
    pub rule: FilterRule,
    pub threshold: f64,
    /// Aggregated kappa per rater, `None` if the rater has no defined pair.
    pub agreement: Vec<(String, Option<f64>)>,
    pub retained: Vec<String>,
    pub removed: Vec<String>,
}

/// Single pass: keep raters whose aggregated kappa reaches `threshold`.
/// Raters without any defined pairwise kappa are removed.
pub fn filter_raters(kappas: &KappaMatrix, threshold: f64, rule: FilterRule) -> Result<RaterFilter> {
    if !threshold.is_finite() {
        return Err(Error::InvalidConfig("kappa threshold must be finite".into()));
    }
    let mut agreement = Vec::new();
    let (mut retained, mut removed) = (Vec::new(), Vec::new());
    for rater in &kappas.raters {
        let values: Vec<f64> = kappas.kappas_of(rater).collect();
        let score = if values.is_empty() {
            None
        } else {
            Some(match rule {
                FilterRule::Mean => values.iter().sum::<f64>() / values.len() as f64,
                FilterRule::Max => values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            })
        };
        if score.is_some_and(|s| s >= threshold) {
            retained.push(rater.clone());
        } else {
            removed.push(rater.clone());
        }
        agreement.push((rater.clone(), score));
    }
    if retained.is_empty() {
        return Err(Error::AllRatersRemoved(threshold));
    }
    Ok(RaterFilter {
        rule,
        threshold,
        agreement,
        retained,
        removed,
    })
}
