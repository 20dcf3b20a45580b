use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::Segment;
use crate::text::{ngrams, TokenSeq};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Smoothing {
    #[default]
    None,
    /// Orders n ≥ 2 use (matches + 1) / (total + 1).
    AddOneHigherOrder,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BleuConfig {
    max_n: usize,
    weights: Vec<f64>,
    pub smoothing: Smoothing,
}

impl BleuConfig {
    /// BLEU-`max_n` with uniform weights and no smoothing.
    pub fn new(max_n: usize) -> Result<Self> {
        if !(1..=4).contains(&max_n) {
            return Err(Error::InvalidConfig(format!("BLEU order {max_n} outside 1..=4")));
        }
        Ok(BleuConfig {
            max_n,
            weights: vec![1.0 / max_n as f64; max_n],
            smoothing: Smoothing::None,
        })
    }

    pub fn with_weights(weights: Vec<f64>) -> Result<Self> {
        let mut cfg = BleuConfig::new(weights.len())?;
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidConfig("BLEU weights must be non-negative".into()));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidConfig(format!("BLEU weights sum to {sum}, not 1")));
        }
        cfg.weights = weights;
        Ok(cfg)
    }

    pub fn smoothed(mut self, smoothing: Smoothing) -> Self {
        self.smoothing = smoothing;
        self
    }

    pub fn max_n(&self) -> usize {
        self.max_n
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

/// Sufficient statistics: clipped matches and candidate n-gram totals per
/// order, candidate length and effective reference length.
#[derive(Debug, Clone, Default)]
struct BleuStats {
    matches: Vec<usize>,
    totals: Vec<usize>,
    hyp_len: usize,
    ref_len: usize,
}

impl BleuStats {
    fn new(max_n: usize) -> Self {
        BleuStats {
            matches: vec![0; max_n],
            totals: vec![0; max_n],
            ..Default::default()
        }
    }

    fn add(&mut self, hyp: &[String], refs: &[&[String]]) {
        for n in 1..=self.matches.len() {
            let counts = ngrams(hyp, n).expect("n >= 1");
            let mut max_ref: HashMap<&[String], usize> = HashMap::new();
            for r in refs {
                for (g, c) in ngrams(r, n).expect("n >= 1") {
                    let slot = max_ref.entry(g).or_insert(0);
                    *slot = (*slot).max(c);
                }
            }
            self.matches[n - 1] += counts
                .iter()
                .map(|(g, &c)| c.min(max_ref.get(g).copied().unwrap_or(0)))
                .sum::<usize>();
            self.totals[n - 1] += hyp.len().saturating_sub(n - 1);
        }
        self.hyp_len += hyp.len();
        self.ref_len += closest_ref_len(hyp.len(), refs);
    }

    fn score(&self, cfg: &BleuConfig) -> f64 {
        if self.hyp_len == 0 {
            return 0.0;
        }
        let mut log_sum = 0.0;
        for (i, w) in cfg.weights.iter().enumerate() {
            let (m, t) = (self.matches[i] as f64, self.totals[i] as f64);
            let p = match cfg.smoothing {
                Smoothing::AddOneHigherOrder if i >= 1 => (m + 1.0) / (t + 1.0),
                _ if t == 0.0 => 0.0,
                _ => m / t,
            };
            if p == 0.0 {
                if *w == 0.0 {
                    continue;
                }
                return 0.0;
            }
            log_sum += w * p.ln();
        }
        let (c, r) = (self.hyp_len as f64, self.ref_len as f64);
        let bp = if c > r { 1.0 } else { (1.0 - r / c).exp() };
        (bp * log_sum.exp()).clamp(0.0, 1.0)
    }
}

/// Reference length closest to the hypothesis length; ties go to the shorter.
fn closest_ref_len(hyp_len: usize, refs: &[&[String]]) -> usize {
    refs.iter()
        .map(|r| r.len())
        .min_by_key(|&len| (len.abs_diff(hyp_len), len))
        .unwrap_or(0)
}

/// Corpus BLEU with n-gram counts pooled over every segment and clipping
/// against the maximum count in any reference of the same segment.
pub fn corpus_bleu(segments: &[Segment], cfg: &BleuConfig) -> Result<f64> {
    if segments.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let mut stats = BleuStats::new(cfg.max_n);
    for seg in segments {
        if seg.references.is_empty() {
            return Err(Error::EmptyReferences(String::new()));
        }
        let refs: Vec<&[String]> = seg.references.iter().map(|r| &r[..]).collect();
        stats.add(&seg.hypothesis, &refs);
    }
    if stats.hyp_len == 0 {
        return Err(Error::EmptyHypotheses);
    }
    Ok(stats.score(cfg))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SentenceBleu {
    pub score: f64,
    /// Set when the hypothesis had no tokens; the score is then 0.
    pub empty_hypothesis: bool,
}

/// Sentence BLEU: the maximum over references of single-reference BLEU.
pub fn sentence_bleu(hyp: &TokenSeq, refs: &[TokenSeq], cfg: &BleuConfig) -> Result<SentenceBleu> {
    if refs.is_empty() {
        return Err(Error::EmptyReferences(String::new()));
    }
    if hyp.is_empty() {
        return Ok(SentenceBleu {
            score: 0.0,
            empty_hypothesis: true,
        });
    }
    let score = refs
        .iter()
        .map(|r| {
            let mut stats = BleuStats::new(cfg.max_n);
            stats.add(hyp, &[r]);
            stats.score(cfg)
        })
        .fold(0.0, f64::max);
    Ok(SentenceBleu {
        score,
        empty_hypothesis: false,
    })
}
