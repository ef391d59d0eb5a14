use thiserror::Error;

/// Errors produced anywhere in the pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed UCI bag-of-words input: {0}")]
    Format(String),

    #[error("line {line}: {what} {id} out of range 1..={max}")]
    IdOutOfRange {
        line: usize,
        what: &'static str,
        id: usize,
        max: usize,
    },

    #[error("docword stream declares {expected} triples but contains {found}")]
    TripleCountMismatch { expected: usize, found: usize },

    #[error("preprocessing removed the entire vocabulary")]
    EmptyVocabulary,

    #[error("corpus has no document with at least two tokens")]
    DegenerateCorpus,

    #[error("co-occurrence matrix is identically zero")]
    ZeroMatrix,

    #[error("word {word} has a zero co-occurrence row sum; filter it during preprocessing")]
    ZeroRowSum { word: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("anchor rows became numerically dependent while selecting anchor {iteration}")]
    RankDeficient { iteration: usize },

    #[error("topic {topic} received no word mass")]
    DegenerateTopic { topic: usize },

    #[error("word {word} appears in no document; coherence denominator undefined")]
    ZeroDocFrequency { word: usize },

    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),

    #[error("word index {word} out of range for vocabulary of size {vocab}")]
    WordOutOfRange { word: usize, vocab: usize },

    #[error("matrix container: {0}")]
    MatrixFormat(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
