use serde::{Deserialize, Serialize};

use crate::text::{stem, synonym_match, SynonymLexicon, TokenSeq};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MatchStage {
    Exact,
    Stem,
    Synonym,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeteorConfig {
    /// Recall counts this many times as much as precision in F_mean.
    pub recall_weight: f64,
    pub penalty_gamma: f64,
    pub penalty_theta: f64,
    pub stages: Vec<MatchStage>,
}

impl Default for MeteorConfig {
    fn default() -> Self {
        MeteorConfig {
            recall_weight: 9.0,
            penalty_gamma: 0.5,
            penalty_theta: 3.0,
            stages: vec![MatchStage::Exact, MatchStage::Stem, MatchStage::Synonym],
        }
    }
}

impl MeteorConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.recall_weight > 0.0 && self.recall_weight.is_finite()) {
            return Err(Error::InvalidConfig("METEOR recall weight must be positive".into()));
        }
        if !(0.0..=1.0).contains(&self.penalty_gamma) {
            return Err(Error::InvalidConfig("METEOR gamma must lie in [0, 1]".into()));
        }
        if !(self.penalty_theta > 0.0 && self.penalty_theta.is_finite()) {
            return Err(Error::InvalidConfig("METEOR theta must be positive".into()));
        }
        Ok(())
    }

    /// α in F_mean = P·R / (α·P + (1 − α)·R).
    pub fn alpha(&self) -> f64 {
        self.recall_weight / (self.recall_weight + 1.0)
    }
}

/// Greedy staged alignment. Within a stage, hypothesis tokens are visited
/// left to right and each takes the leftmost free reference token that
/// matches. Returns (hyp index, ref index) pairs sorted by hyp index.
fn align(
    hyp: &[String],
    reference: &[String],
    stages: &[MatchStage],
    lexicon: &SynonymLexicon,
) -> Vec<(usize, usize)> {
    let mut hyp_free = vec![true; hyp.len()];
    let mut ref_free = vec![true; reference.len()];
    let mut pairs = Vec::new();
    let mut hyp_stems: Option<Vec<String>> = None;
    let mut ref_stems: Option<Vec<String>> = None;

    for stage in stages {
        if *stage == MatchStage::Stem && hyp_stems.is_none() {
            hyp_stems = Some(hyp.iter().map(|t| stem(t)).collect());
            ref_stems = Some(reference.iter().map(|t| stem(t)).collect());
        }
        for i in 0..hyp.len() {
            if !hyp_free[i] {
                continue;
            }
            let found = (0..reference.len()).find(|&j| {
                ref_free[j]
                    && match stage {
                        MatchStage::Exact => hyp[i] == reference[j],
                        MatchStage::Stem => {
                            hyp_stems.as_ref().unwrap()[i] == ref_stems.as_ref().unwrap()[j]
                        }
                        MatchStage::Synonym => synonym_match(&hyp[i], &reference[j], lexicon),
                    }
            });
            if let Some(j) = found {
                hyp_free[i] = false;
                ref_free[j] = false;
                pairs.push((i, j));
            }
        }
    }
    pairs.sort_unstable();
    pairs
}

/// Maximal runs of matches adjacent in both sentences.
fn count_chunks(pairs: &[(usize, usize)]) -> usize {
    if pairs.is_empty() {
        return 0;
    }
    1 + pairs
        .windows(2)
        .filter(|w| w[1].0 != w[0].0 + 1 || w[1].1 != w[0].1 + 1)
        .count()
}

fn meteor_single(hyp: &[String], reference: &[String], cfg: &MeteorConfig, lexicon: &SynonymLexicon) -> f64 {
    let pairs = align(hyp, reference, &cfg.stages, lexicon);
    let m = pairs.len();
    if m == 0 {
        return 0.0;
    }
    let precision = m as f64 / hyp.len() as f64;
    let recall = m as f64 / reference.len() as f64;
    let alpha = cfg.alpha();
    let f_mean = precision * recall / (alpha * precision + (1.0 - alpha) * recall);
    let frag = count_chunks(&pairs) as f64 / m as f64;
    let penalty = cfg.penalty_gamma * frag.powf(cfg.penalty_theta);
    (f_mean * (1.0 - penalty)).clamp(0.0, 1.0)
}

/// METEOR against each reference, maximum kept.
pub fn meteor(
    hyp: &TokenSeq,
    refs: &[TokenSeq],
    cfg: &MeteorConfig,
    lexicon: &SynonymLexicon,
) -> Result<f64> {
    if refs.is_empty() {
        return Err(Error::EmptyReferences(String::new()));
    }
    Ok(refs
        .iter()
        .map(|r| meteor_single(hyp, r, cfg, lexicon))
        .fold(0.0, f64::max))
}
