use thiserror::Error;

/// Errors produced by parsing, graph construction, extraction, and scoring.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: malformed line")]
    MalformedLine { line: usize },
    #[error("line {line}: empty word field")]
    EmptyWord { line: usize },
    #[error("invalid UTF-8 at byte offset {offset}")]
    InvalidUtf8 { offset: usize },
    #[error("duplicate synset id `{id}`")]
    DuplicateSynsetId { id: String },
    #[error("synset `{id}`: both sides are empty")]
    EmptySynset { id: String },
    #[error("synset `{id}` has an empty side and cannot be flattened")]
    EmptySide { id: String },
    #[error("input contains no translation pairs")]
    EmptyInput,
    #[error("invalid cycle length bound {k_max}: must be an even integer >= 4")]
    InvalidBound { k_max: usize },
    #[error("graph with {nodes} nodes is too large for brute-force enumeration (limit 16)")]
    GraphTooLarge { nodes: usize },
    #[error("unknown consolidation policy `{name}`")]
    UnknownPolicy { name: String },
    #[error("invalid jaccard threshold {theta}: must be in (0, 1]")]
    InvalidTheta { theta: f64 },
    #[error("cosine is undefined for an empty word set")]
    EmptySet,
    #[error("no extracted synsets to score")]
    EmptyExtracted,
    #[error("no gold synsets to score")]
    EmptyGold,
    #[error("invalid word: {reason}")]
    InvalidWord { reason: String },
    #[error("language labels must be non-empty and distinct")]
    InvalidLabels,
    #[error("word `{word}` contains `|` and cannot be written as TSV; use the jsonl format")]
    TsvUnsafeWord { word: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
