use std::collections::{BTreeMap, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::acts::DialogueActSet;
use crate::text::{tokenize, TokenSeq};
use crate::{Error, Result};

/// Placeholder token for a slot type: uppercase, non-alphanumerics as `_`.
pub fn placeholder_for(slot_type: &str) -> String {
    slot_type
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() {
                c.to_ascii_uppercase()
            } else {
                '_'
            }
        })
        .collect()
}

/// Placeholders are tokens of two or more characters drawn from `A-Z0-9_`
/// starting with a letter. Delexicalized text is otherwise lowercase.
pub fn is_placeholder(token: &str) -> bool {
    let mut chars = token.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_uppercase())
        && token.len() >= 2
        && chars.all(|c| c.is_ascii_uppercase() || c.is_ascii_digit() || c == '_')
}

/// What happened to one slot value during delexicalization.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Substitution {
    pub slot_type: String,
    pub value: String,
    pub placeholder: String,
    /// Number of occurrences replaced.
    pub count: usize,
    /// `yes`/`no`/`dontcare`: left in place on purpose.
    pub special: bool,
}

impl Substitution {
    pub fn unplaced(&self) -> bool {
        !self.special && self.count == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Delexicalized {
    pub sentence: String,
    pub substitutions: Vec<Substitution>,
}

impl Delexicalized {
    pub fn unplaced(&self) -> impl Iterator<Item = &Substitution> {
        self.substitutions.iter().filter(|s| s.unplaced())
    }
}

/// Tokenizes `sentence` and replaces every token-aligned, case-insensitive
/// occurrence of each slot value with its placeholder, longest value first.
/// Replaced spans are never matched again.
pub fn delexicalize(sentence: &str, acts: &DialogueActSet) -> Delexicalized {
    let tokens = tokenize(sentence).into_inner();
    let mut out: Vec<Option<String>> = tokens.iter().cloned().map(Some).collect();
    let mut taken = vec![false; tokens.len()];

    let mut candidates: Vec<(Substitution, Vec<String>)> = Vec::new();
    for e in acts.entries() {
        let (Some(slot_type), Some(value)) = (&e.slot_type, &e.slot_value) else {
            continue;
        };
        let value_tokens = tokenize(value).into_inner();
        let duplicate = candidates
            .iter()
            .any(|(s, v)| s.slot_type == *slot_type && *v == value_tokens);
        if duplicate {
            continue;
        }
        candidates.push((
            Substitution {
                slot_type: slot_type.clone(),
                value: value.clone(),
                placeholder: placeholder_for(slot_type),
                count: 0,
                special: e.is_special(),
            },
            value_tokens,
        ));
    }

    let mut order: Vec<usize> = (0..candidates.len()).collect();
    order.sort_by_key(|&i| {
        let v = &candidates[i].1;
        let chars: usize = v.iter().map(|t| t.chars().count()).sum();
        (std::cmp::Reverse(v.len()), std::cmp::Reverse(chars))
    });

    for i in order {
        let (sub, value) = &mut candidates[i];
        if sub.special || value.is_empty() || value.len() > tokens.len() {
            continue;
        }
        let k = value.len();
        let mut start = 0;
        while start + k <= tokens.len() {
            let free = !taken[start..start + k].iter().any(|&t| t);
            if free && tokens[start..start + k] == value[..] {
                out[start] = Some(sub.placeholder.clone());
                for slot in &mut out[start + 1..start + k] {
                    *slot = None;
                }
                taken[start..start + k].iter_mut().for_each(|t| *t = true);
                sub.count += 1;
                start += k;
            } else {
                start += 1;
            }
        }
    }

    Delexicalized {
        sentence: out.into_iter().flatten().collect::<Vec<_>>().join(" "),
        substitutions: candidates.into_iter().map(|(s, _)| s).collect(),
    }
}

/// Values per placeholder, in act order, for slots that must be realised.
fn required_values(acts: &DialogueActSet) -> HashMap<String, VecDeque<&str>> {
    let mut values: HashMap<String, VecDeque<&str>> = HashMap::new();
    for e in acts.entries().iter().filter(|e| e.is_required()) {
        let (Some(t), Some(v)) = (&e.slot_type, &e.slot_value) else {
            unreachable!("required slots carry type and value")
        };
        values.entry(placeholder_for(t)).or_default().push_back(v);
    }
    values
}

pub(crate) fn required_counts(acts: &DialogueActSet) -> BTreeMap<String, usize> {
    required_values(acts)
        .into_iter()
        .map(|(p, v)| (p, v.len()))
        .collect()
}

pub(crate) fn placeholder_counts(tokens: &[String]) -> BTreeMap<String, usize> {
    let mut counts = BTreeMap::new();
    for t in tokens.iter().filter(|t| is_placeholder(t)) {
        *counts.entry(t.clone()).or_insert(0) += 1;
    }
    counts
}

/// Replaces placeholders left to right. Repeated placeholders of one type
/// consume that type's values in act order.
pub fn relexicalize(delexicalized: &str, acts: &DialogueActSet) -> Result<String> {
    let mut values = required_values(acts);
    let mut out = Vec::new();
    for token in delexicalized.split_whitespace() {
        if is_placeholder(token) {
            let value = values
                .get_mut(token)
                .and_then(VecDeque::pop_front)
                .ok_or_else(|| Error::UnfilledPlaceholder(token.to_string()))?;
            out.push(value.trim());
        } else {
            out.push(token);
        }
    }
    Ok(out.join(" "))
}

/// `(missing + redundant) / required` over placeholder tokens of a
/// delexicalized candidate. `None` when no slot requires realisation.
pub fn slot_error_rate(candidate: &TokenSeq, acts: &DialogueActSet) -> Option<f64> {
    let required = required_counts(acts);
    let total: usize = required.values().sum();
    if total == 0 {
        return None;
    }
    let found = placeholder_counts(candidate);
    let missing: usize = required
        .iter()
        .map(|(p, &n)| n.saturating_sub(found.get(p).copied().unwrap_or(0)))
        .sum();
    let redundant: usize = found
        .iter()
        .map(|(p, &n)| n.saturating_sub(required.get(p).copied().unwrap_or(0)))
        .sum();
    Some((missing + redundant) as f64 / total as f64)
}
