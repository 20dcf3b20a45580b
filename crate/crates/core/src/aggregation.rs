//! Runs the enabled metrics over a corpus and assembles a [`MetricReport`].
//!
//! Per-sentence metrics take the maximum over references and are averaged
//! over instances with a defined score. Corpus BLEU pools n-gram counts and
//! is reported under its own `corpus_bleuN` keys next to the mean sentence
//! BLEU (`bleuN`).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, EmbeddingTable, EvalInstance, SentenceVectorTable};
use crate::embedding::{embedding_metric_score, skip_vector_similarity, EmbeddingKind, SimilarityScore};
use crate::overlap::{
    corpus_bleu, meteor, rouge_l, sentence_bleu, BleuConfig, MeteorConfig, RougeConfig, Segment, Smoothing,
};
use crate::text::{SynonymLexicon, Tokenizer};
use crate::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Metric {
    Bleu1,
    Bleu2,
    Bleu3,
    Bleu4,
    Meteor,
    RougeL,
    EmbeddingAverage,
    VectorExtrema,
    GreedyMatching,
    SkipThought,
}

impl Metric {
    pub const ALL: [Metric; 10] = [
        Metric::Bleu1,
        Metric::Bleu2,
        Metric::Bleu3,
        Metric::Bleu4,
        Metric::Meteor,
        Metric::RougeL,
        Metric::EmbeddingAverage,
        Metric::VectorExtrema,
        Metric::GreedyMatching,
        Metric::SkipThought,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Metric::Bleu1 => "bleu1",
            Metric::Bleu2 => "bleu2",
            Metric::Bleu3 => "bleu3",
            Metric::Bleu4 => "bleu4",
            Metric::Meteor => "meteor",
            Metric::RougeL => "rouge_l",
            Metric::EmbeddingAverage => "embedding_average",
            Metric::VectorExtrema => "vector_extrema",
            Metric::GreedyMatching => "greedy_matching",
            Metric::SkipThought => "skip_thought",
        }
    }

    fn bleu_order(self) -> Option<usize> {
        match self {
            Metric::Bleu1 => Some(1),
            Metric::Bleu2 => Some(2),
            Metric::Bleu3 => Some(3),
            Metric::Bleu4 => Some(4),
            _ => None,
        }
    }

    fn embedding_kind(self) -> Option<EmbeddingKind> {
        match self {
            Metric::EmbeddingAverage => Some(EmbeddingKind::Average),
            Metric::VectorExtrema => Some(EmbeddingKind::Extrema),
            Metric::GreedyMatching => Some(EmbeddingKind::Greedy),
            _ => None,
        }
    }

    /// Parses a comma-separated list. `bleu` expands to BLEU-1..4, `all`
    /// to every metric, `embedding` to the three word-embedding metrics.
    pub fn parse_list(list: &str) -> Result<BTreeSet<Metric>> {
        let mut set = BTreeSet::new();
        for name in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            match name.to_ascii_lowercase().as_str() {
                "all" => set.extend(Metric::ALL),
                "bleu" => set.extend([Metric::Bleu1, Metric::Bleu2, Metric::Bleu3, Metric::Bleu4]),
                "embedding" => set.extend([
                    Metric::EmbeddingAverage,
                    Metric::VectorExtrema,
                    Metric::GreedyMatching,
                ]),
                _ => {
                    set.insert(name.parse()?);
                }
            }
        }
        if set.is_empty() {
            return Err(Error::InvalidConfig("no metrics selected".into()));
        }
        Ok(set)
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let m = match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "bleu1" | "bleu_1" => Metric::Bleu1,
            "bleu2" | "bleu_2" => Metric::Bleu2,
            "bleu3" | "bleu_3" => Metric::Bleu3,
            "bleu4" | "bleu_4" => Metric::Bleu4,
            "meteor" => Metric::Meteor,
            "rouge" | "rouge_l" | "rougel" => Metric::RougeL,
            "average" | "embedding_average" => Metric::EmbeddingAverage,
            "extrema" | "vector_extrema" => Metric::VectorExtrema,
            "greedy" | "greedy_matching" => Metric::GreedyMatching,
            "skipthought" | "skip_thought" | "sentvec" => Metric::SkipThought,
            _ => return Err(Error::InvalidConfig(format!("unknown metric {s:?}"))),
        };
        Ok(m)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalConfig {
    pub tokenizer: Tokenizer,
    /// Applied to per-instance BLEU.
    pub sentence_bleu_smoothing: Smoothing,
    /// Applied to pooled corpus BLEU.
    pub corpus_bleu_smoothing: Smoothing,
    pub meteor: MeteorConfig,
    pub rouge: RougeConfig,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            tokenizer: Tokenizer::default(),
            sentence_bleu_smoothing: Smoothing::AddOneHigherOrder,
            corpus_bleu_smoothing: Smoothing::None,
            meteor: MeteorConfig::default(),
            rouge: RougeConfig::default(),
        }
    }
}

/// Optional resources; a metric that needs a missing table is an error.
#[derive(Debug, Clone, Copy, Default)]
pub struct Tables<'a> {
    pub embeddings: Option<&'a EmbeddingTable>,
    pub sentence_vectors: Option<&'a SentenceVectorTable>,
    pub lexicon: Option<&'a SynonymLexicon>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InstanceScore {
    pub value: f64,
    pub defined: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceScores {
    pub id: String,
    pub scores: BTreeMap<String, InstanceScore>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusScore {
    /// `None` when no instance had a defined score.
    pub value: Option<f64>,
    pub defined: usize,
    pub undefined: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub metrics: Vec<String>,
    pub eval: EvalConfig,
    pub synonym_groups: usize,
    pub embedding_dim: Option<usize>,
    pub sentence_vector_dim: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub schema_version: u32,
    pub config: ConfigEcho,
    pub instances: usize,
    pub corpus_level: BTreeMap<String, CorpusScore>,
    pub per_instance: Vec<InstanceScores>,
    pub warnings: Vec<String>,
}

impl MetricReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }

    pub fn from_json(bytes: &[u8]) -> Result<Self> {
        let report: MetricReport = serde_json::from_slice(bytes).map_err(|e| Error::MalformedRecord {
            line: e.line(),
            reason: e.to_string(),
        })?;
        if report.schema_version != SCHEMA_VERSION {
            return Err(Error::InvalidConfig(format!(
                "unsupported report schema_version {}",
                report.schema_version
            )));
        }
        Ok(report)
    }

    /// Metric name → instance id → score (`None` when undefined).
    pub fn metric_scores(&self) -> BTreeMap<String, BTreeMap<String, Option<f64>>> {
        let mut out: BTreeMap<String, BTreeMap<String, Option<f64>>> = BTreeMap::new();
        for inst in &self.per_instance {
            for (metric, s) in &inst.scores {
                out.entry(metric.clone())
                    .or_default()
                    .insert(inst.id.clone(), s.defined.then_some(s.value));
            }
        }
        out
    }
}

struct Scorer<'a> {
    metrics: Vec<Metric>,
    bleu: BTreeMap<Metric, BleuConfig>,
    config: &'a EvalConfig,
    tables: Tables<'a>,
    empty_lexicon: SynonymLexicon,
}

impl Scorer<'_> {
    fn score(&self, inst: &EvalInstance, seg: &Segment) -> Result<(BTreeMap<String, InstanceScore>, Vec<String>)> {
        let mut scores = BTreeMap::new();
        let mut warnings = Vec::new();
        for &metric in &self.metrics {
            let s = if let Some(cfg) = self.bleu.get(&metric) {
                let b = sentence_bleu(&seg.hypothesis, &seg.references, cfg)?;
                if b.empty_hypothesis && metric == self.metrics[0] {
                    warnings.push(format!("instance {:?}: empty hypothesis scores 0 on BLEU", inst.id));
                }
                InstanceScore {
                    value: b.score,
                    defined: true,
                }
            } else if let Some(kind) = metric.embedding_kind() {
                let table = self.tables.embeddings.ok_or(Error::MissingTable("embeddings"))?;
                let s = embedding_metric_score(&seg.hypothesis, &seg.references, table, kind)?;
                to_instance(s)
            } else {
                match metric {
                    Metric::Meteor => InstanceScore {
                        value: meteor(
                            &seg.hypothesis,
                            &seg.references,
                            &self.config.meteor,
                            self.tables.lexicon.unwrap_or(&self.empty_lexicon),
                        )?,
                        defined: true,
                    },
                    Metric::RougeL => InstanceScore {
                        value: rouge_l(&seg.hypothesis, &seg.references, &self.config.rouge)?,
                        defined: true,
                    },
                    Metric::SkipThought => {
                        let table = self
                            .tables
                            .sentence_vectors
                            .ok_or(Error::MissingTable("sentence vectors"))?;
                        let refs: Vec<String> = (0..inst.references.len())
                            .map(|k| SentenceVectorTable::reference_key(&inst.id, k))
                            .collect();
                        to_instance(skip_vector_similarity(
                            &SentenceVectorTable::hypothesis_key(&inst.id),
                            &refs,
                            table,
                        )?)
                    }
                    _ => unreachable!("bleu and embedding metrics handled above"),
                }
            };
            scores.insert(metric.name().to_string(), s);
        }
        Ok((scores, warnings))
    }
}

fn to_instance(s: SimilarityScore) -> InstanceScore {
    InstanceScore {
        value: s.value,
        defined: s.defined,
    }
}

/// Scores every instance with every enabled metric. Work runs on the current
/// rayon pool; results are reduced in corpus order, so the report does not
/// depend on the thread count.
pub fn evaluate(
    corpus: &Corpus,
    metrics: &BTreeSet<Metric>,
    tables: Tables<'_>,
    config: &EvalConfig,
) -> Result<MetricReport> {
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    if metrics.is_empty() {
        return Err(Error::InvalidConfig("no metrics selected".into()));
    }
    config.meteor.validate()?;
    config.rouge.validate()?;
    for m in metrics {
        if m.embedding_kind().is_some() && tables.embeddings.is_none() {
            return Err(Error::MissingTable("embeddings"));
        }
        if *m == Metric::SkipThought && tables.sentence_vectors.is_none() {
            return Err(Error::MissingTable("sentence vectors"));
        }
    }

    let mut bleu = BTreeMap::new();
    for m in metrics {
        if let Some(n) = m.bleu_order() {
            bleu.insert(*m, BleuConfig::new(n)?.smoothed(config.sentence_bleu_smoothing));
        }
    }
    let scorer = Scorer {
        metrics: metrics.iter().copied().collect(),
        bleu,
        config,
        tables,
        empty_lexicon: SynonymLexicon::default(),
    };

    let segments: Vec<Segment> = corpus
        .instances()
        .par_iter()
        .map(|inst| Segment::from_instance(inst, &config.tokenizer))
        .collect();
    let scored: Vec<(BTreeMap<String, InstanceScore>, Vec<String>)> = corpus
        .instances()
        .par_iter()
        .zip(segments.par_iter())
        .map(|(inst, seg)| scorer.score(inst, seg))
        .collect::<Result<_>>()?;

    let mut warnings = Vec::new();
    let mut per_instance = Vec::with_capacity(corpus.len());
    for (inst, (scores, w)) in corpus.iter().zip(scored) {
        warnings.extend(w);
        per_instance.push(InstanceScores {
            id: inst.id.clone(),
            scores,
        });
    }

    let mut corpus_level = BTreeMap::new();
    for m in metrics {
        let (mut sum, mut defined, mut undefined) = (0.0, 0usize, 0usize);
        for inst in &per_instance {
            let s = inst.scores[m.name()];
            if s.defined {
                sum += s.value;
                defined += 1;
            } else {
                undefined += 1;
            }
        }
        corpus_level.insert(
            m.name().to_string(),
            CorpusScore {
                value: (defined > 0).then(|| sum / defined as f64),
                defined,
                undefined,
            },
        );
        if let Some(n) = m.bleu_order() {
            let cfg = BleuConfig::new(n)?.smoothed(config.corpus_bleu_smoothing);
            let value = match corpus_bleu(&segments, &cfg) {
                Ok(v) => Some(v),
                Err(Error::EmptyHypotheses) => {
                    warnings.push(format!("corpus BLEU-{n} undefined: every hypothesis is empty"));
                    None
                }
                Err(e) => return Err(e),
            };
            corpus_level.insert(
                format!("corpus_bleu{n}"),
                CorpusScore {
                    value,
                    defined: if value.is_some() { corpus.len() } else { 0 },
                    undefined: if value.is_some() { 0 } else { corpus.len() },
                },
            );
        }
    }

    Ok(MetricReport {
        schema_version: SCHEMA_VERSION,
        config: ConfigEcho {
            metrics: metrics.iter().map(|m| m.name().to_string()).collect(),
            eval: config.clone(),
            synonym_groups: tables.lexicon.map_or(0, |l| l.groups().len()),
            embedding_dim: tables.embeddings.map(EmbeddingTable::dim),
            sentence_vector_dim: tables.sentence_vectors.map(SentenceVectorTable::dim),
        },
        instances: corpus.len(),
        corpus_level,
        per_instance,
        warnings,
    })
}
