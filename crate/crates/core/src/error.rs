use alloc::string::String;
use core::fmt;

/// Errors produced by corpus construction, metric kernels, and probes.
#[derive(Debug, Clone, PartialEq)]
pub enum CoreError {
    /// A line or token list was empty after trimming.
    EmptySentence,
    /// A token was empty or contained whitespace.
    InvalidToken(String),
    /// An operation over a corpus received zero instances.
    EmptyCorpus,
    /// Two aligned corpora differ in length.
    LengthMismatch { left: usize, right: usize },
    /// Parallel reference corpora are not rectangular.
    RaggedReferences {
        corpus: usize,
        expected: usize,
        got: usize,
    },
    /// Leave-one-out needs at least two reference corpora.
    TooFewCorpora { got: usize },
    /// An instance id occurs more than once in a corpus.
    DuplicateId(String),
    /// An instance carries no references.
    NoReferences { instance: usize },
    /// An instance that must be scored carries no hypothesis.
    MissingHypothesis(String),
    /// A kernel requiring at least one reference received none.
    MissingReferences,
    /// Token embeddings disagree on vector dimension.
    EmbeddingDim { expected: usize, got: usize },
    /// Idf weighting was requested but a sentence carries no idf values.
    MissingIdf,
    /// A configuration value is out of range.
    InvalidConfig(&'static str),
    /// Random substitution cannot reach the requested fraction.
    FractionUnreachable {
        required: usize,
        available: usize,
        total: usize,
    },
}

impl fmt::Display for CoreError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoreError::EmptySentence => write!(f, "sentence is empty after trimming"),
            CoreError::InvalidToken(t) => write!(f, "invalid token {t:?}"),
            CoreError::EmptyCorpus => write!(f, "corpus contains no instances"),
            CoreError::LengthMismatch { left, right } => {
                write!(f, "aligned corpora differ in length: {left} vs {right}")
            }
            CoreError::RaggedReferences {
                corpus,
                expected,
                got,
            } => write!(
                f,
                "reference corpus {corpus} has {got} sentences, expected {expected}"
            ),
            CoreError::TooFewCorpora { got } => {
                write!(f, "leave-one-out needs at least 2 reference corpora, got {got}")
            }
            CoreError::DuplicateId(id) => write!(f, "duplicate instance id {id:?}"),
            CoreError::NoReferences { instance } => {
                write!(f, "instance {instance} has no references")
            }
            CoreError::MissingHypothesis(id) => {
                write!(f, "instance {id:?} has no hypothesis")
            }
            CoreError::MissingReferences => write!(f, "at least one reference is required"),
            CoreError::EmbeddingDim { expected, got } => {
                write!(f, "embedding dimension mismatch: expected {expected}, got {got}")
            }
            CoreError::MissingIdf => {
                write!(f, "idf weighting requested but no idf values are attached")
            }
            CoreError::InvalidConfig(msg) => write!(f, "invalid configuration: {msg}"),
            CoreError::FractionUnreachable {
                required,
                available,
                total,
            } => write!(
                f,
                "cannot substitute {required} of {total} tokens: only {available} eligible"
            ),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for CoreError {}
