//! Embedding-based similarity: embedding average, vector extrema, greedy
//! matching, and cosine over externally encoded sentence vectors.
//!
//! Out-of-vocabulary tokens are skipped when building sentence vectors and
//! contribute zero in greedy matching. A score is *undefined* when either
//! side has no in-vocabulary token; undefined scores carry value 0 and are
//! excluded from corpus means.

use serde::{Deserialize, Serialize};

use crate::corpus::{EmbeddingTable, SentenceVectorTable};
use crate::text::TokenSeq;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimilarityScore {
    pub value: f64,
    pub defined: bool,
}

impl SimilarityScore {
    pub const UNDEFINED: SimilarityScore = SimilarityScore {
        value: 0.0,
        defined: false,
    };

    pub fn defined(value: f64) -> Self {
        SimilarityScore {
            value,
            defined: true,
        }
    }

    /// Maximum over defined scores; undefined iff all are undefined.
    pub fn max_of<I: IntoIterator<Item = SimilarityScore>>(scores: I) -> Self {
        scores
            .into_iter()
            .filter(|s| s.defined)
            .fold(SimilarityScore::UNDEFINED, |best, s| {
                if !best.defined || s.value > best.value {
                    s
                } else {
                    best
                }
            })
    }
}

/// A sentence-level vector; `defined` is false when no token was in vocabulary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SentenceVector {
    pub components: Vec<f64>,
    pub defined: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EmbeddingKind {
    Average,
    Extrema,
    Greedy,
}

fn dot(u: &[f64], v: &[f64]) -> f64 {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

fn norm(u: &[f64]) -> f64 {
    dot(u, u).sqrt()
}

/// Cosine similarity; 0 when either vector is zero.
pub fn cosine(u: &[f64], v: &[f64]) -> Result<f64> {
    if u.len() != v.len() {
        return Err(Error::DimensionMismatch(u.len(), v.len()));
    }
    Ok(cosine_unchecked(u, v))
}

fn cosine_unchecked(u: &[f64], v: &[f64]) -> f64 {
    let denom = norm(u) * norm(v);
    if denom == 0.0 {
        return 0.0;
    }
    (dot(u, v) / denom).clamp(-1.0, 1.0)
}

fn in_vocab<'a>(seq: &'a [String], table: &'a EmbeddingTable) -> impl Iterator<Item = &'a [f64]> {
    seq.iter().filter_map(|w| table.get(w))
}

/// Sum of word vectors divided by the norm of that sum.
pub fn embedding_average(seq: &[String], table: &EmbeddingTable) -> SentenceVector {
    let mut sum = vec![0.0; table.dim()];
    let mut any = false;
    for v in in_vocab(seq, table) {
        any = true;
        sum.iter_mut().zip(v).for_each(|(s, x)| *s += x);
    }
    let n = norm(&sum);
    if n > 0.0 {
        sum.iter_mut().for_each(|s| *s /= n);
    }
    SentenceVector {
        components: sum,
        defined: any,
    }
}

/// Per dimension, the word maximum if it is at least the magnitude of the
/// word minimum, otherwise the minimum.
pub fn vector_extrema(seq: &[String], table: &EmbeddingTable) -> SentenceVector {
    let dim = table.dim();
    let mut max = vec![f64::NEG_INFINITY; dim];
    let mut min = vec![f64::INFINITY; dim];
    let mut any = false;
    for v in in_vocab(seq, table) {
        any = true;
        for d in 0..dim {
            max[d] = max[d].max(v[d]);
            min[d] = min[d].min(v[d]);
        }
    }
    if !any {
        return SentenceVector {
            components: vec![0.0; dim],
            defined: false,
        };
    }
    let components = max
        .iter()
        .zip(&min)
        .map(|(&hi, &lo)| if hi >= lo.abs() { hi } else { lo })
        .collect();
    SentenceVector {
        components,
        defined: true,
    }
}

/// Unit-length vector per token; `None` for out-of-vocabulary tokens. Zero
/// vectors stay zero, so their cosine with anything is 0.
fn unit_vectors(seq: &[String], table: &EmbeddingTable) -> Vec<Option<Vec<f64>>> {
    seq.iter()
        .map(|w| {
            table.get(w).map(|v| {
                let n = norm(v);
                if n == 0.0 {
                    v.to_vec()
                } else {
                    v.iter().map(|x| x / n).collect()
                }
            })
        })
        .collect()
}

/// Mean over `from` tokens of the best cosine against any in-vocabulary
/// `to` token. Out-of-vocabulary `from` tokens contribute 0.
fn greedy_one_way(from: &[Option<Vec<f64>>], to: &[&[f64]]) -> f64 {
    let total: f64 = from
        .iter()
        .map(|e| match e {
            Some(e) => to
                .iter()
                .map(|t| dot(e, t).clamp(-1.0, 1.0))
                .fold(f64::NEG_INFINITY, f64::max),
            None => 0.0,
        })
        .sum();
    total / from.len() as f64
}

/// Symmetrised greedy matching: the mean of both one-way scores.
pub fn greedy_matching(hyp: &[String], reference: &[String], table: &EmbeddingTable) -> SimilarityScore {
    let hyp_units = unit_vectors(hyp, table);
    let ref_units = unit_vectors(reference, table);
    let hyp_vecs: Vec<&[f64]> = hyp_units.iter().flatten().map(Vec::as_slice).collect();
    let ref_vecs: Vec<&[f64]> = ref_units.iter().flatten().map(Vec::as_slice).collect();
    if hyp_vecs.is_empty() || ref_vecs.is_empty() {
        return SimilarityScore::UNDEFINED;
    }
    let forward = greedy_one_way(&hyp_units, &ref_vecs);
    let backward = greedy_one_way(&ref_units, &hyp_vecs);
    SimilarityScore::defined(((forward + backward) / 2.0).clamp(-1.0, 1.0))
}

fn sentence_cosine(a: &SentenceVector, b: &SentenceVector) -> SimilarityScore {
    if !(a.defined && b.defined) {
        return SimilarityScore::UNDEFINED;
    }
    SimilarityScore::defined(cosine_unchecked(&a.components, &b.components))
}

/// Score against each reference with the chosen method, maximum kept.
pub fn embedding_metric_score(
    hyp: &TokenSeq,
    refs: &[TokenSeq],
    table: &EmbeddingTable,
    kind: EmbeddingKind,
) -> Result<SimilarityScore> {
    if refs.is_empty() {
        return Err(Error::EmptyReferences(String::new()));
    }
    let score = match kind {
        EmbeddingKind::Average => {
            let h = embedding_average(hyp, table);
            SimilarityScore::max_of(refs.iter().map(|r| sentence_cosine(&h, &embedding_average(r, table))))
        }
        EmbeddingKind::Extrema => {
            let h = vector_extrema(hyp, table);
            SimilarityScore::max_of(refs.iter().map(|r| sentence_cosine(&h, &vector_extrema(r, table))))
        }
        EmbeddingKind::Greedy => {
            SimilarityScore::max_of(refs.iter().map(|r| greedy_matching(hyp, r, table)))
        }
    };
    Ok(score)
}

/// Maximum cosine between the hypothesis vector and each reference vector.
pub fn skip_vector_similarity(
    hyp_id: &str,
    ref_ids: &[String],
    table: &SentenceVectorTable,
) -> Result<SimilarityScore> {
    if ref_ids.is_empty() {
        return Err(Error::EmptyReferences(hyp_id.to_string()));
    }
    let lookup = |id: &str| table.get(id).ok_or_else(|| Error::MissingId(id.to_string()));
    let h = lookup(hyp_id)?;
    let mut scores = Vec::with_capacity(ref_ids.len());
    for id in ref_ids {
        scores.push(SimilarityScore::defined(cosine(h, lookup(id)?)?));
    }
    Ok(SimilarityScore::max_of(scores))
}
