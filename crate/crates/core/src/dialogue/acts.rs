use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::corpus::Corpus;
use crate::{Error, Result};

/// Slot values that are never substituted nor counted by the slot error rate.
pub const SPECIAL_VALUES: &[&str] = &["yes", "no", "dontcare"];

/// One `act(slot_type = slot_value)` triple. Slot type and value are optional.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DialogueAct {
    pub act: String,
    pub slot_type: Option<String>,
    pub slot_value: Option<String>,
}

impl DialogueAct {
    pub fn bare(act: &str) -> Self {
        DialogueAct {
            act: act.to_string(),
            slot_type: None,
            slot_value: None,
        }
    }

    pub fn slot(act: &str, slot_type: &str, value: Option<&str>) -> Self {
        DialogueAct {
            act: act.to_string(),
            slot_type: Some(slot_type.to_string()),
            slot_value: value.map(str::to_string),
        }
    }

    /// Canonical fused key: `ACT-SLOTTYPE`, or `ACT` for bare acts.
    pub fn fused_key(&self) -> String {
        match &self.slot_type {
            Some(t) => format!("{}-{}", self.act.to_uppercase(), t.to_uppercase()),
            None => self.act.to_uppercase(),
        }
    }

    pub fn is_special(&self) -> bool {
        self.slot_value
            .as_deref()
            .is_some_and(|v| SPECIAL_VALUES.contains(&v.trim().to_lowercase().as_str()))
    }

    /// True for slots whose value must be realised in the output.
    pub fn is_required(&self) -> bool {
        self.slot_type.is_some() && self.slot_value.is_some() && !self.is_special()
    }
}

impl fmt::Display for DialogueAct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.slot_type, &self.slot_value) {
            (Some(t), Some(v)) => write!(f, "{}({} = {})", self.act, t, v),
            (Some(t), None) => write!(f, "{}({})", self.act, t),
            _ => write!(f, "{}()", self.act),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DialogueActSet {
    entries: Vec<DialogueAct>,
}

impl DialogueActSet {
    pub fn new(entries: Vec<DialogueAct>) -> Result<Self> {
        for e in &entries {
            if e.act.trim().is_empty() {
                return Err(Error::InvalidConfig("dialogue act name is empty".into()));
            }
            if e.slot_value.is_some() && e.slot_type.is_none() {
                return Err(Error::InvalidConfig(format!(
                    "act {:?} has a slot value without a slot type",
                    e.act
                )));
            }
        }
        Ok(DialogueActSet { entries })
    }

    pub fn entries(&self) -> &[DialogueAct] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn signature(&self) -> DASignature {
        DASignature(self.entries.iter().map(DialogueAct::fused_key).collect())
    }
}

/// Set of fused act-slot keys; slot values are ignored.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DASignature(BTreeSet<String>);

impl DASignature {
    pub fn keys(&self) -> &BTreeSet<String> {
        &self.0
    }

    pub fn jaccard(&self, other: &DASignature) -> f64 {
        let union = self.0.union(&other.0).count();
        if union == 0 {
            return 1.0;
        }
        self.0.intersection(&other.0).count() as f64 / union as f64
    }
}

impl fmt::Display for DASignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let keys: Vec<&str> = self.0.iter().map(String::as_str).collect();
        write!(f, "{{{}}}", keys.join(", "))
    }
}

/// Ordered fused act-slot keys indexing the positions of a [`DAVector`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DaVocabulary(Vec<String>);

impl DaVocabulary {
    /// Keeps the given order; later duplicates are dropped.
    pub fn new<I: IntoIterator<Item = String>>(keys: I) -> Self {
        let mut seen = BTreeSet::new();
        let keys = keys
            .into_iter()
            .map(|k| k.to_uppercase())
            .filter(|k| seen.insert(k.clone()))
            .collect();
        DaVocabulary(keys)
    }

    pub fn sorted<I: IntoIterator<Item = String>>(keys: I) -> Self {
        let set: BTreeSet<String> = keys.into_iter().map(|k| k.to_uppercase()).collect();
        DaVocabulary(set.into_iter().collect())
    }

    pub fn keys(&self) -> &[String] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn index_of(&self, key: &str) -> Option<usize> {
        self.0.iter().position(|k| k == key)
    }
}

/// Binary vector over a vocabulary: bit `i` is set iff key `i` is present.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DAVector(Vec<u8>);

impl DAVector {
    pub fn bits(&self) -> &[u8] {
        &self.0
    }
}

pub fn build_da_vocabulary(corpus: &Corpus) -> Result<DaVocabulary> {
    let mut any = false;
    let mut keys = Vec::new();
    for inst in corpus {
        if let Some(acts) = &inst.acts {
            any = true;
            keys.extend(acts.entries().iter().map(DialogueAct::fused_key));
        }
    }
    if !any {
        return Err(Error::MissingActs);
    }
    Ok(DaVocabulary::sorted(keys))
}

pub fn encode_da_vector(acts: &DialogueActSet, vocab: &DaVocabulary) -> Result<DAVector> {
    let mut bits = vec![0u8; vocab.len()];
    for e in acts.entries() {
        let key = e.fused_key();
        let i = vocab.index_of(&key).ok_or(Error::UnknownActSlot(key))?;
        bits[i] = 1;
    }
    Ok(DAVector(bits))
}
