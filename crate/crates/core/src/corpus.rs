//! Corpora, word embeddings, precomputed sentence vectors, and human ratings.
//!
//! All loaders take raw bytes, reject invalid UTF-8, and produce immutable
//! structures whose iteration order follows the input.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::dialogue::{DialogueAct, DialogueActSet};
use crate::{Error, Result};

/// One hypothesis with its references and optional dialogue acts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalInstance {
    pub id: String,
    pub hypothesis: String,
    pub references: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "acts_serde")]
    pub acts: Option<DialogueActSet>,
}

/// Instances in file order with pairwise distinct ids.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Corpus {
    instances: Vec<EvalInstance>,
}

impl Corpus {
    pub fn new(instances: Vec<EvalInstance>) -> Result<Self> {
        let mut seen = HashSet::new();
        for inst in &instances {
            if inst.references.is_empty() {
                return Err(Error::EmptyReferences(inst.id.clone()));
            }
            if !seen.insert(inst.id.as_str()) {
                return Err(Error::DuplicateId(inst.id.clone()));
            }
        }
        Ok(Corpus { instances })
    }

    pub fn instances(&self) -> &[EvalInstance] {
        &self.instances
    }

    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, EvalInstance> {
        self.instances.iter()
    }

    /// Parses JSON lines. Blank lines are skipped; line numbers in errors
    /// are 1-based.
    pub fn from_jsonl(source: &[u8]) -> Result<Self> {
        let text = std::str::from_utf8(source)?;
        let mut instances = Vec::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let inst: EvalInstance =
                serde_json::from_str(line).map_err(|e| Error::MalformedRecord {
                    line: i + 1,
                    reason: e.to_string(),
                })?;
            instances.push(inst);
        }
        Corpus::new(instances)
    }

    /// One hypothesis file plus one file per reference set, aligned by line.
    /// Instance ids are 1-based line numbers.
    pub fn from_parallel(hypotheses: &[u8], references: &[&[u8]]) -> Result<Self> {
        let hyps = lines_of(hypotheses)?;
        let refs = references
            .iter()
            .map(|r| lines_of(r))
            .collect::<Result<Vec<_>>>()?;
        for (index, r) in refs.iter().enumerate() {
            if r.len() != hyps.len() {
                return Err(Error::UnequalLineCounts {
                    hyp: hyps.len(),
                    index: index + 1,
                    refs: r.len(),
                });
            }
        }
        let instances = hyps
            .iter()
            .enumerate()
            .map(|(i, h)| EvalInstance {
                id: (i + 1).to_string(),
                hypothesis: h.to_string(),
                references: refs.iter().map(|r| r[i].to_string()).collect(),
                acts: None,
            })
            .collect();
        Corpus::new(instances)
    }

    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for inst in &self.instances {
            out.push_str(&serde_json::to_string(inst).expect("instances always serialize"));
            out.push('\n');
        }
        out
    }
}

impl<'a> IntoIterator for &'a Corpus {
    type Item = &'a EvalInstance;
    type IntoIter = std::slice::Iter<'a, EvalInstance>;

    fn into_iter(self) -> Self::IntoIter {
        self.instances.iter()
    }
}

fn lines_of(bytes: &[u8]) -> Result<Vec<&str>> {
    let text = std::str::from_utf8(bytes)?;
    Ok(text.lines().collect())
}

/// JSON shape of acts: `[{act, slots: [{type, value}]}]`.
mod acts_serde {
    use super::*;

    #[derive(Serialize, Deserialize)]
    struct ActJson {
        act: String,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        slots: Vec<SlotJson>,
    }

    #[derive(Serialize, Deserialize)]
    struct SlotJson {
        #[serde(rename = "type")]
        slot_type: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        value: Option<String>,
    }

    pub fn serialize<S: serde::Serializer>(
        acts: &Option<DialogueActSet>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        let acts = acts.as_ref().expect("skipped when None");
        // Consecutive entries with the same act name fold back into one object.
        let mut out: Vec<ActJson> = Vec::new();
        for e in acts.entries() {
            let slot = e.slot_type.as_ref().map(|t| SlotJson {
                slot_type: t.clone(),
                value: e.slot_value.clone(),
            });
            match (out.last_mut(), slot) {
                (Some(last), Some(slot)) if last.act == e.act && !last.slots.is_empty() => {
                    last.slots.push(slot)
                }
                (_, slot) => out.push(ActJson {
                    act: e.act.clone(),
                    slots: slot.into_iter().collect(),
                }),
            }
        }
        out.serialize(s)
    }

    pub fn deserialize<'de, D: serde::Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Option<DialogueActSet>, D::Error> {
        use serde::de::Error as _;
        let raw: Option<Vec<ActJson>> = Option::deserialize(d)?;
        let Some(raw) = raw else { return Ok(None) };
        let mut entries = Vec::new();
        for a in raw {
            if a.slots.is_empty() {
                entries.push(DialogueAct::bare(&a.act));
            }
            for s in a.slots {
                entries.push(DialogueAct {
                    act: a.act.clone(),
                    slot_type: Some(s.slot_type),
                    slot_value: s.value,
                });
            }
        }
        DialogueActSet::new(entries).map(Some).map_err(D::Error::custom)
    }
}

/// Parses `key v1 ... vd` lines shared by embeddings and sentence vectors.
/// A first line of exactly two unsigned integers `count dim` is a header
/// when the following line has `dim` components.
fn parse_vector_lines(source: &[u8]) -> Result<(usize, HashMap<String, Vec<f64>>)> {
    let text = std::str::from_utf8(source)?;
    let lines: Vec<(usize, Vec<&str>)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split_whitespace().collect::<Vec<_>>()))
        .filter(|(_, f)| !f.is_empty())
        .collect();

    let mut rows = lines.as_slice();
    if let Some((_, first)) = rows.first() {
        let header_dim = match first.as_slice() {
            [count, dim] => count
                .parse::<usize>()
                .ok()
                .and(dim.parse::<usize>().ok()),
            _ => None,
        };
        if let Some(dim) = header_dim {
            let next_matches = rows.get(1).is_none_or(|(_, f)| f.len() == dim + 1);
            if next_matches {
                rows = &rows[1..];
            }
        }
    }
    if rows.is_empty() {
        return Err(Error::EmptyFile);
    }

    let dim = rows[0].1.len() - 1;
    let mut entries = HashMap::with_capacity(rows.len());
    for (line, fields) in rows {
        let found = fields.len() - 1;
        if found != dim || found == 0 {
            return Err(Error::InconsistentDimension {
                line: *line,
                expected: dim,
                found,
            });
        }
        let vector = fields[1..]
            .iter()
            .map(|v| {
                v.parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| Error::NonNumeric {
                        line: *line,
                        value: v.to_string(),
                    })
            })
            .collect::<Result<Vec<_>>>()?;
        entries.insert(fields[0].to_string(), vector);
    }
    Ok((dim, entries))
}

/// Word vectors of one fixed dimension. Later duplicates overwrite earlier ones.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingTable {
    dim: usize,
    entries: HashMap<String, Vec<f64>>,
}

impl EmbeddingTable {
    pub fn from_text(source: &[u8]) -> Result<Self> {
        let (dim, entries) = parse_vector_lines(source)?;
        Ok(EmbeddingTable { dim, entries })
    }

    pub fn from_entries<I, S>(dim: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, Vec<f64>)>,
        S: Into<String>,
    {
        if dim == 0 {
            return Err(Error::InvalidConfig("embedding dimension must be positive".into()));
        }
        let mut map = HashMap::new();
        for (word, v) in entries {
            if v.len() != dim {
                return Err(Error::DimensionMismatch(dim, v.len()));
            }
            map.insert(word.into(), v);
        }
        Ok(EmbeddingTable { dim, entries: map })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, word: &str) -> Option<&[f64]> {
        self.entries.get(word).map(Vec::as_slice)
    }

    pub fn contains(&self, word: &str) -> bool {
        self.entries.contains_key(word)
    }

    /// Copy of the table with every vector multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        let entries = self
            .entries
            .iter()
            .map(|(w, v)| (w.clone(), v.iter().map(|x| x * factor).collect()))
            .collect();
        EmbeddingTable {
            dim: self.dim,
            entries,
        }
    }
}

/// Sentence vectors produced by an external encoder, keyed by sentence id.
#[derive(Debug, Clone, PartialEq)]
pub struct SentenceVectorTable {
    dim: usize,
    entries: HashMap<String, Vec<f64>>,
}

impl SentenceVectorTable {
    pub fn from_text(source: &[u8]) -> Result<Self> {
        let (dim, entries) = parse_vector_lines(source)?;
        Ok(SentenceVectorTable { dim, entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&[f64]> {
        self.entries.get(id).map(Vec::as_slice)
    }

    /// Key under which the hypothesis vector of instance `id` is stored.
    pub fn hypothesis_key(id: &str) -> String {
        format!("{id}:hyp")
    }

    /// Key for reference `index` (0-based) of instance `id`.
    pub fn reference_key(id: &str, index: usize) -> String {
        format!("{id}:ref{index}")
    }
}

/// Item × rater grid of Likert scores in 1..=5. Missing cells are allowed.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RatingMatrix {
    items: Vec<String>,
    raters: Vec<String>,
    scores: BTreeMap<(usize, usize), u8>,
}

impl RatingMatrix {
    /// Reads CSV with header `item_id,rater_id,score`. Item and rater order
    /// is first appearance.
    pub fn from_csv(source: &[u8]) -> Result<Self> {
        std::str::from_utf8(source)?;
        let mut reader = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(source);
        let headers = reader.headers()?.clone();
        let expected = ["item_id", "rater_id", "score"];
        if headers.iter().collect::<Vec<_>>() != expected {
            return Err(Error::MalformedRecord {
                line: 1,
                reason: format!("expected header item_id,rater_id,score, got {}", headers.iter().collect::<Vec<_>>().join(",")),
            });
        }
        let mut matrix = RatingMatrix::default();
        for (i, record) in reader.records().enumerate() {
            let record = record?;
            let line = record.position().map_or(i + 2, |p| p.line() as usize);
            let (item, rater, raw) = (&record[0], &record[1], &record[2]);
            let score: i64 = raw.parse().map_err(|_| Error::NonIntegerScore {
                line,
                value: raw.to_string(),
            })?;
            if !(1..=5).contains(&score) {
                return Err(Error::ScoreOutOfRange { line, score });
            }
            matrix.insert(item, rater, score as u8)?;
        }
        Ok(matrix)
    }

    pub fn insert(&mut self, item: &str, rater: &str, score: u8) -> Result<()> {
        if !(1..=5).contains(&score) {
            return Err(Error::ScoreOutOfRange {
                line: 0,
                score: score.into(),
            });
        }
        let i = index_of(&mut self.items, item);
        let r = index_of(&mut self.raters, rater);
        if self.scores.insert((i, r), score).is_some() {
            return Err(Error::DuplicateRating {
                item: item.to_string(),
                rater: rater.to_string(),
            });
        }
        Ok(())
    }

    pub fn items(&self) -> &[String] {
        &self.items
    }

    pub fn raters(&self) -> &[String] {
        &self.raters
    }

    pub fn score(&self, item: &str, rater: &str) -> Option<u8> {
        let i = self.items.iter().position(|x| x == item)?;
        let r = self.raters.iter().position(|x| x == rater)?;
        self.scores.get(&(i, r)).copied()
    }

    /// Scores of one rater keyed by item index.
    pub(crate) fn rater_column(&self, rater: usize) -> BTreeMap<usize, u8> {
        self.scores
            .iter()
            .filter(|((_, r), _)| *r == rater)
            .map(|(&(i, _), &s)| (i, s))
            .collect()
    }

    pub(crate) fn score_at(&self, item: usize, rater: usize) -> Option<u8> {
        self.scores.get(&(item, rater)).copied()
    }

    pub(crate) fn rater_index(&self, rater: &str) -> Option<usize> {
        self.raters.iter().position(|x| x == rater)
    }
}

fn index_of(list: &mut Vec<String>, key: &str) -> usize {
    match list.iter().position(|x| x == key) {
        Some(i) => i,
        None => {
            list.push(key.to_string());
            list.len() - 1
        }
    }
}
