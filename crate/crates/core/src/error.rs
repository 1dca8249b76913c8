use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },

    #[error("line {line}: duplicate id {id:?}")]
    DuplicateId { line: usize, id: String },

    #[error("unknown label {0:?}")]
    UnknownLabel(String),

    #[error(
        "hypothesis has no tokens after normalization{}",
        .id.as_ref().map(|id| format!(" (example {id:?})")).unwrap_or_default()
    )]
    EmptyHypothesis { id: Option<String> },

    #[error("requested k = {requested} but only {available} entailment examples are available")]
    NotEnoughExamples { requested: usize, available: usize },

    #[error("{count} example(s) have no prediction: {}", .ids.join(", "))]
    MissingPredictions { count: usize, ids: Vec<String> },

    #[error("id {0:?} is missing from the gold labels")]
    MissingGold(String),

    #[error("nothing to score: {0}")]
    Empty(&'static str),

    #[error("invalid perturbation spec: {0}")]
    InvalidSpec(String),

    #[error("invalid example {id:?}: {message}")]
    InvalidExample { id: String, message: String },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for filesystem and stream failures, false for problems with the
    /// data itself.
    pub fn is_io(&self) -> bool {
        matches!(self, Error::Io { .. })
    }
}
