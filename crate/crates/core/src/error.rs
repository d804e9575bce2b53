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

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("seed lists overlap between senses: {}", .pairs.join(", "))]
    SeedOverlap { pairs: Vec<String> },

    #[error("seed list for {0} is empty")]
    EmptySense(String),

    #[error("vocabulary is empty after applying min_count {min_count}")]
    EmptyVocabulary { min_count: u64 },

    #[error("no training windows left after vocabulary filtering")]
    NoTrainingData,

    #[error("non-finite training loss in epoch {epoch} after {instances} windows (learning rate {learning_rate})")]
    NonFiniteLoss {
        epoch: usize,
        instances: usize,
        learning_rate: f64,
    },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("label not found in embedding vocabulary: {0}")]
    UnknownLabel(String),

    #[error("requested {requested} principal components but the data has rank at most {rank}")]
    RankDeficient { requested: usize, rank: usize },

    #[error("model file {path}: {message}")]
    ModelFormat { path: PathBuf, message: String },

    #[error("stage `{stage}` failed: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error("{0}")]
    Csv(#[from] csv::Error),

    #[error("{0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for errors caused by bad input data or configuration rather than
    /// failures during execution. The CLI maps these to exit code 1.
    pub fn is_validation(&self) -> bool {
        match self {
            Error::Config(_) | Error::SeedOverlap { .. } | Error::EmptySense(_) | Error::Parse { .. } => true,
            Error::Stage { source, .. } => source.is_validation(),
            _ => false,
        }
    }
}
