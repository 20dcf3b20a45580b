use serde::{Deserialize, Serialize};

use crate::text::{lcs_length, TokenSeq};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RougeConfig {
    pub beta: f64,
}

impl Default for RougeConfig {
    fn default() -> Self {
        RougeConfig { beta: 1.2 }
    }
}

impl RougeConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return Err(Error::InvalidConfig("ROUGE beta must be positive".into()));
        }
        Ok(())
    }
}

fn rouge_single(hyp: &[String], reference: &[String], beta: f64) -> f64 {
    let lcs = lcs_length(hyp, reference);
    if lcs == 0 {
        return 0.0;
    }
    let p = lcs as f64 / hyp.len() as f64;
    let r = lcs as f64 / reference.len() as f64;
    let b2 = beta * beta;
    ((1.0 + b2) * p * r / (r + b2 * p)).clamp(0.0, 1.0)
}

/// LCS-based F-measure against each reference, maximum kept.
pub fn rouge_l(hyp: &TokenSeq, refs: &[TokenSeq], cfg: &RougeConfig) -> Result<f64> {
    if refs.is_empty() {
        return Err(Error::EmptyReferences(String::new()));
    }
    Ok(refs
        .iter()
        .map(|r| rouge_single(hyp, r, cfg.beta))
        .fold(0.0, f64::max))
}
