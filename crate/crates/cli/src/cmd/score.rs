use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use nlgm::aggregation::{evaluate, EvalConfig, Metric, MetricReport, Tables};
use nlgm::corpus::{Corpus, EmbeddingTable, SentenceVectorTable};
use nlgm::overlap::Smoothing;
use nlgm::text::{SynonymLexicon, Tokenizer};

use crate::failure::{emit, read, Context, Failure};

#[derive(clap::Args)]
pub struct Args {
    /// Hypotheses, one per line.
    #[arg(long, requires = "refs", conflicts_with = "jsonl")]
    hyp: Option<PathBuf>,
    /// Reference files, line-aligned with --hyp.
    #[arg(long, num_args = 1.., requires = "hyp")]
    refs: Vec<PathBuf>,
    /// Corpus in JSON Lines form instead of --hyp/--refs.
    #[arg(long, required_unless_present = "hyp")]
    jsonl: Option<PathBuf>,
    /// Word vectors in word2vec/GloVe text format.
    #[arg(long)]
    embeddings: Option<PathBuf>,
    /// Sentence vectors keyed `<id>:hyp` and `<id>:ref<k>`.
    #[arg(long)]
    sentvecs: Option<PathBuf>,
    /// Synonym groups for METEOR, one whitespace-separated group per line.
    #[arg(long)]
    synonyms: Option<PathBuf>,
    /// Comma-separated metrics: bleu, bleu1..bleu4, meteor, rouge, average,
    /// extrema, greedy, embedding, skipthought, all. Defaults to every
    /// metric whose inputs are available.
    #[arg(long)]
    metrics: Option<String>,
    /// Smoothing for per-sentence BLEU.
    #[arg(long, value_enum, default_value_t = SmoothingArg::AddOne)]
    bleu_smoothing: SmoothingArg,
    /// Smoothing for corpus-level BLEU.
    #[arg(long, value_enum, default_value_t = SmoothingArg::None)]
    corpus_bleu_smoothing: SmoothingArg,
    /// Keep case when tokenizing.
    #[arg(long)]
    no_lowercase: bool,
    /// Worker threads; 0 uses all cores.
    #[arg(long, env = "NLGM_THREADS", default_value_t = 0)]
    threads: usize,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print a plain-text table instead of JSON.
    #[arg(long)]
    pretty: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SmoothingArg {
    None,
    AddOne,
}

impl From<SmoothingArg> for Smoothing {
    fn from(s: SmoothingArg) -> Self {
        match s {
            SmoothingArg::None => Smoothing::None,
            SmoothingArg::AddOne => Smoothing::AddOneHigherOrder,
        }
    }
}

fn select_metrics(args: &Args) -> Result<BTreeSet<Metric>, Failure> {
    let list = match &args.metrics {
        Some(list) => list.clone(),
        None => {
            let mut list = String::from("bleu,meteor,rouge");
            if args.embeddings.is_some() {
                list.push_str(",embedding");
            }
            if args.sentvecs.is_some() {
                list.push_str(",skipthought");
            }
            list
        }
    };
    let metrics = Metric::parse_list(&list)?;
    let needs_embeddings = metrics
        .iter()
        .any(|m| matches!(m, Metric::EmbeddingAverage | Metric::VectorExtrema | Metric::GreedyMatching));
    if needs_embeddings && args.embeddings.is_none() {
        return Err(Failure::usage("embedding metrics need --embeddings"));
    }
    if metrics.contains(&Metric::SkipThought) && args.sentvecs.is_none() {
        return Err(Failure::usage("skipthought needs --sentvecs"));
    }
    Ok(metrics)
}

fn load_corpus(args: &Args) -> Result<Corpus, Failure> {
    if let Some(path) = &args.jsonl {
        return Corpus::from_jsonl(&read(path)?).at(path);
    }
    let hyp_path = args.hyp.as_deref().expect("clap enforces --hyp or --jsonl");
    let hyp = read(hyp_path)?;
    let refs = args
        .refs
        .iter()
        .map(|p| read(p))
        .collect::<Result<Vec<_>, _>>()?;
    let slices: Vec<&[u8]> = refs.iter().map(Vec::as_slice).collect();
    Ok(Corpus::from_parallel(&hyp, &slices)?)
}

fn optional<T>(
    path: Option<&Path>,
    parse: impl FnOnce(&[u8]) -> nlgm::Result<T>,
) -> Result<Option<T>, Failure> {
    path.map(|p| parse(&read(p)?).at(p)).transpose()
}

pub fn run(args: Args) -> Result<(), Failure> {
    let metrics = select_metrics(&args)?;
    let corpus = load_corpus(&args)?;
    let embeddings = optional(args.embeddings.as_deref(), EmbeddingTable::from_text)?;
    let sentvecs = optional(args.sentvecs.as_deref(), SentenceVectorTable::from_text)?;
    let lexicon = optional(args.synonyms.as_deref(), |bytes| {
        Ok(SynonymLexicon::parse(std::str::from_utf8(bytes)?))
    })?;

    let config = EvalConfig {
        tokenizer: Tokenizer {
            lowercase: !args.no_lowercase,
        },
        sentence_bleu_smoothing: args.bleu_smoothing.into(),
        corpus_bleu_smoothing: args.corpus_bleu_smoothing.into(),
        ..EvalConfig::default()
    };
    let tables = Tables {
        embeddings: embeddings.as_ref(),
        sentence_vectors: sentvecs.as_ref(),
        lexicon: lexicon.as_ref(),
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.threads)
        .build()
        .map_err(Failure::internal)?;
    let report = pool.install(|| evaluate(&corpus, &metrics, tables, &config))?;
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }

    let text = if args.pretty {
        pretty(&report)
    } else {
        let mut json = report.to_json();
        json.push('\n');
        json
    };
    emit(args.out.as_deref(), &text)
}

fn pretty(report: &MetricReport) -> String {
    let mut out = format!("{} instances\n", report.instances);
    let _ = writeln!(out, "{:<20} {:>8} {:>8} {:>10}", "metric", "score", "defined", "undefined");
    for (name, s) in &report.corpus_level {
        let value = s.value.map_or_else(|| "-".to_string(), |v| format!("{v:.4}"));
        let _ = writeln!(out, "{name:<20} {value:>8} {:>8} {:>10}", s.defined, s.undefined);
    }
    out
}
