//! Word-overlap metrics: BLEU, METEOR and ROUGE-L.
//!
//! Sentence-level scores take the maximum over references. Corpus BLEU
//! pools clipped n-gram counts across all instances instead.

mod bleu;
mod meteor;
mod rouge;

pub use bleu::{corpus_bleu, sentence_bleu, BleuConfig, SentenceBleu, Smoothing};
pub use meteor::{meteor, MatchStage, MeteorConfig};
pub use rouge::{rouge_l, RougeConfig};

use crate::corpus::EvalInstance;
use crate::text::{TokenSeq, Tokenizer};

/// A tokenized hypothesis with its tokenized references.
#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    pub hypothesis: TokenSeq,
    pub references: Vec<TokenSeq>,
}

impl Segment {
    pub fn new(hypothesis: TokenSeq, references: Vec<TokenSeq>) -> Self {
        Segment {
            hypothesis,
            references,
        }
    }

    pub fn from_instance(instance: &EvalInstance, tokenizer: &Tokenizer) -> Self {
        Segment {
            hypothesis: tokenizer.tokenize(&instance.hypothesis),
            references: instance
                .references
                .iter()
                .map(|r| tokenizer.tokenize(r))
                .collect(),
        }
    }
}
