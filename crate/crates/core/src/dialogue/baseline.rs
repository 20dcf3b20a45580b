//! Random retrieval baseline: for a query act set, pick a training sentence
//! with the same act-slot signature and fill in the query's slot values.

use std::collections::BTreeMap;

use rand::Rng;
use serde::Serialize;

use super::acts::{DASignature, DialogueActSet};
use super::delex::{delexicalize, placeholder_counts, relexicalize, required_counts};
use crate::corpus::Corpus;
use crate::text::TokenSeq;
use crate::{Error, Result};

#[derive(Debug, Clone, Default)]
pub struct BaselineIndex {
    buckets: BTreeMap<DASignature, Vec<String>>,
}

/// Instances skipped while building an index.
#[derive(Debug, Clone, Default, Serialize)]
pub struct BuildReport {
    pub skipped_without_acts: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Generation {
    pub text: String,
    pub delexicalized: String,
    pub signature: DASignature,
    /// True when the query signature was unseen and the nearest bucket by
    /// Jaccard similarity was used.
    pub backed_off: bool,
}

impl BaselineIndex {
    /// Delexicalizes every reference of every annotated instance and stores
    /// it under the instance's signature.
    pub fn build(train: &Corpus) -> (Self, BuildReport) {
        let mut index = BaselineIndex::default();
        let mut report = BuildReport::default();
        for inst in train {
            let Some(acts) = inst.acts.as_ref().filter(|a| !a.is_empty()) else {
                report.skipped_without_acts.push(inst.id.clone());
                continue;
            };
            let bucket = index.buckets.entry(acts.signature()).or_default();
            for reference in &inst.references {
                bucket.push(delexicalize(reference, acts).sentence);
            }
        }
        (index, report)
    }

    pub fn is_empty(&self) -> bool {
        self.buckets.is_empty()
    }

    pub fn len(&self) -> usize {
        self.buckets.len()
    }

    pub fn bucket(&self, signature: &DASignature) -> Option<&[String]> {
        self.buckets.get(signature).map(Vec::as_slice)
    }

    /// Exact signature if present, otherwise the stored signature with the
    /// highest Jaccard similarity (ties go to the lexicographically first).
    pub fn nearest(&self, signature: &DASignature) -> Option<(&DASignature, &[String], bool)> {
        if let Some((sig, bucket)) = self.buckets.get_key_value(signature) {
            return Some((sig, bucket, false));
        }
        let mut best: Option<(&DASignature, &Vec<String>, f64)> = None;
        for (sig, bucket) in &self.buckets {
            let score = sig.jaccard(signature);
            if best.is_none_or(|(_, _, b)| score > b) {
                best = Some((sig, bucket, score));
            }
        }
        best.map(|(s, b, _)| (s, b.as_slice(), true))
    }

    /// Draws uniformly among the bucket's sentences whose placeholders match
    /// the query's required slots exactly; if none do, among those that can
    /// at least be filled from the query's values.
    pub fn generate<R: Rng + ?Sized>(&self, acts: &DialogueActSet, rng: &mut R) -> Result<Generation> {
        let (signature, bucket, backed_off) =
            self.nearest(&acts.signature()).ok_or(Error::EmptyIndex)?;

        let required = required_counts(acts);
        let mut exact = Vec::new();
        let mut fillable = Vec::new();
        for sentence in bucket {
            let found = placeholder_counts(&TokenSeq::from_whitespace(sentence));
            if found == required {
                exact.push(sentence);
            } else if found
                .iter()
                .all(|(p, n)| required.get(p).is_some_and(|avail| n <= avail))
            {
                fillable.push(sentence);
            }
        }
        let pool = if exact.is_empty() { fillable } else { exact };
        if pool.is_empty() {
            return Err(Error::NoCompatibleSentence(signature.to_string()));
        }
        let chosen = pool[rng.random_range(0..pool.len())];
        Ok(Generation {
            text: relexicalize(chosen, acts)?,
            delexicalized: chosen.clone(),
            signature: signature.clone(),
            backed_off,
        })
    }
}
