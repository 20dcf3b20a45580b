//! Evaluation toolkit for natural language generation.
//!
//! Word-overlap metrics (BLEU, METEOR, ROUGE-L), embedding metrics
//! (embedding average, vector extrema, greedy matching, cosine over
//! precomputed sentence vectors), dialogue-act utilities, and the
//! statistics needed to correlate automatic metrics with human ratings.
//!
//! Every metric follows the same multi-reference rule: score the hypothesis
//! against each reference, keep the maximum, then average over the corpus.
//! Corpus-level BLEU is the exception and pools clipped n-gram counts.

pub mod aggregation;
pub mod corpus;
pub mod dialogue;
pub mod embedding;
mod error;
pub mod overlap;
pub mod seed;
pub mod stats;
pub mod text;

pub use error::{Error, Result};
