//! Tokenization and token-sequence primitives shared by every metric.

mod lexicon;
mod stem;

use std::collections::HashMap;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub use lexicon::SynonymLexicon;
pub use stem::stem;

/// Characters split off into tokens of their own.
pub const PUNCTUATION: &[char] = &['.', ',', '!', '?', ';', ':', '\'', '"', '(', ')'];

/// An ordered list of non-empty, whitespace-free tokens. May be empty.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TokenSeq(Vec<String>);

impl TokenSeq {
    /// Splits on whitespace only, keeping case. Used for already-tokenized
    /// text such as delexicalized sentences whose placeholders are uppercase.
    pub fn from_whitespace(text: &str) -> Self {
        TokenSeq(text.split_whitespace().map(str::to_owned).collect())
    }

    pub fn tokens(&self) -> &[String] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<String> {
        self.0
    }

    pub fn join(&self) -> String {
        self.0.join(" ")
    }
}

impl Deref for TokenSeq {
    type Target = [String];

    fn deref(&self) -> &[String] {
        &self.0
    }
}

impl<S: Into<String>> FromIterator<S> for TokenSeq {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        TokenSeq(
            iter.into_iter()
                .map(Into::into)
                .filter(|t: &String| !t.is_empty())
                .collect(),
        )
    }
}

/// Tokenizer settings. Lowercasing is on by default.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tokenizer {
    pub lowercase: bool,
}

impl Default for Tokenizer {
    fn default() -> Self {
        Tokenizer { lowercase: true }
    }
}

impl Tokenizer {
    pub fn tokenize(&self, raw: &str) -> TokenSeq {
        let mut tokens = Vec::new();
        let mut current = String::new();
        for ch in raw.chars() {
            if ch.is_whitespace() {
                flush(&mut current, &mut tokens);
            } else if PUNCTUATION.contains(&ch) {
                flush(&mut current, &mut tokens);
                tokens.push(ch.to_string());
            } else if self.lowercase {
                current.extend(ch.to_lowercase());
            } else {
                current.push(ch);
            }
        }
        flush(&mut current, &mut tokens);
        TokenSeq(tokens)
    }
}

fn flush(current: &mut String, tokens: &mut Vec<String>) {
    if !current.is_empty() {
        tokens.push(std::mem::take(current));
    }
}

/// Lowercases, splits `.,!?;:'"()` into their own tokens, splits on whitespace.
pub fn tokenize(raw: &str) -> TokenSeq {
    Tokenizer::default().tokenize(raw)
}

/// Multiset of contiguous n-grams.
pub type NgramCounts<'a> = HashMap<&'a [String], usize>;

pub fn ngrams(seq: &[String], n: usize) -> Result<NgramCounts<'_>> {
    if n == 0 {
        return Err(Error::ZeroNgramOrder);
    }
    let mut counts = HashMap::new();
    for window in seq.windows(n) {
        *counts.entry(window).or_insert(0) += 1;
    }
    Ok(counts)
}

/// Length of a longest common subsequence, O(|a|·|b|) time and O(|b|) space.
pub fn lcs_length<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    if a.is_empty() || b.is_empty() {
        return 0;
    }
    let mut prev = vec![0usize; b.len() + 1];
    let mut curr = vec![0usize; b.len() + 1];
    for x in a {
        for (j, y) in b.iter().enumerate() {
            curr[j + 1] = if x == y {
                prev[j] + 1
            } else {
                prev[j + 1].max(curr[j])
            };
        }
        std::mem::swap(&mut prev, &mut curr);
    }
    prev[b.len()]
}

/// True iff `a == b` or the two words share a lexicon group.
pub fn synonym_match(a: &str, b: &str, lexicon: &SynonymLexicon) -> bool {
    a == b || lexicon.share_group(a, b)
}
