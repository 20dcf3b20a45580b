use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("input is not valid UTF-8: {0}")]
    Utf8(#[from] std::str::Utf8Error),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("malformed record at line {line}: {reason}")]
    MalformedRecord { line: usize, reason: String },

    #[error("unequal line counts: hypothesis file has {hyp} lines, reference file {index} has {refs}")]
    UnequalLineCounts { hyp: usize, index: usize, refs: usize },

    #[error("duplicate id {0:?}")]
    DuplicateId(String),

    #[error("instance {0:?} has an empty reference list")]
    EmptyReferences(String),

    #[error("empty file")]
    EmptyFile,

    #[error("inconsistent dimension at line {line}: expected {expected}, found {found}")]
    InconsistentDimension {
        line: usize,
        expected: usize,
        found: usize,
    },

    #[error("non-numeric component {value:?} at line {line}")]
    NonNumeric { line: usize, value: String },

    #[error("score out of range at line {line}: {score} (expected 1..5)")]
    ScoreOutOfRange { line: usize, score: i64 },

    #[error("non-integer score {value:?} at line {line}")]
    NonIntegerScore { line: usize, value: String },

    #[error("duplicate rating for item {item:?} by rater {rater:?}")]
    DuplicateRating { item: String, rater: String },

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("n-gram order must be at least 1")]
    ZeroNgramOrder,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("empty corpus")]
    EmptyCorpus,

    #[error("all hypotheses are empty")]
    EmptyHypotheses,

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("unknown id {0:?}")]
    MissingId(String),

    #[error("corpus carries no dialogue-act annotations")]
    MissingActs,

    #[error("act-slot pair {0} is not in the vocabulary")]
    UnknownActSlot(String),

    #[error("placeholder {0} has no available slot value")]
    UnfilledPlaceholder(String),

    #[error("baseline index is empty")]
    EmptyIndex,

    #[error("no sentence in bucket {0} can be realised with the query's slot values")]
    NoCompatibleSentence(String),

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("need at least {needed} observations, got {got}")]
    TooFewObservations { needed: usize, got: usize },

    #[error("input is constant; correlation is undefined")]
    ConstantInput,

    #[error("need at least 2 raters, got {0}")]
    TooFewRaters(usize),

    #[error("all raters removed at threshold {0}")]
    AllRatersRemoved(f64),

    #[error("item {0:?} has no scores from the selected raters")]
    UnratedItem(String),

    #[error("missing table for metric {0}")]
    MissingTable(&'static str),
}
