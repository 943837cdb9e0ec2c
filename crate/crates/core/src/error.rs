use thiserror::Error;

/// Engine-wide error type.
#[derive(Debug, Error)]
pub enum EngineError {
    #[error("syntax error at line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("undeclared symbol `{symbol}` ({context})")]
    UndeclaredSymbol { symbol: String, context: String },
    #[error("start symbol `{0}` is also a vocabulary word")]
    StartInVocabulary(String),
    #[error("word `{0}` is not in the vocabulary")]
    UnknownWord(String),
    #[error("generator `{generator}` does not apply at position {position}")]
    InapplicableGenerator { generator: String, position: usize },
    #[error("depth bound {bound} exceeded while the closure was still growing")]
    DepthBoundExceeded { bound: usize },
    #[error("state cap {cap} exceeded while exploring the automaton")]
    StateCapExceeded { cap: usize },
    #[error("vocabulary mismatch: {0}")]
    VocabularyMismatch(String),
    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),
    #[error("invalid weight `{text}` for semiring {semiring}: {message}")]
    InvalidWeight {
        text: String,
        semiring: String,
        message: String,
    },
    #[error("invalid parse state `{text}`: {message}")]
    StateSyntax { text: String, message: String },
    #[error("corpus entry {index}: {message}")]
    CorpusEntry { index: usize, message: String },
    #[error("corpus: {0}")]
    Corpus(String),
    #[error("prefix `{0}` has zero mass in the model")]
    ZeroMassPrefix(String),
    #[error("fit: {0}")]
    Fit(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl EngineError {
    /// Resource-bound errors get a dedicated exit code in the CLI.
    pub fn is_resource_bound(&self) -> bool {
        matches!(
            self,
            EngineError::DepthBoundExceeded { .. } | EngineError::StateCapExceeded { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, EngineError>;
