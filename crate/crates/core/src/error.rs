use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("input file not found: {}", .0.display())]
    MissingInput(PathBuf),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {message}")]
    MalformedRow { path: String, line: u64, message: String },

    #[error("line {line}: unknown label `{label}`; valid labels are: {}", .valid.join(", "))]
    UnknownLabel {
        line: u64,
        label: String,
        valid: Vec<String>,
    },

    #[error("no instances pass filter (min_confidence = {0})")]
    NoInstances(f64),

    #[error("class {class} has {available} instances available, {required} required")]
    InsufficientClass {
        class: String,
        available: usize,
        required: usize,
    },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("elapsed time cannot be negative (got {0})")]
    NegativeElapsed(f64),

    #[error("training pool must cover at least two classes")]
    SingleClassPool,

    #[error("word vector file {path}, line {line}: expected {expected} components, found {found}")]
    DimensionMismatch {
        path: String,
        line: u64,
        expected: usize,
        found: usize,
    },

    #[error("evaluation failed: {0}")]
    Evaluation(String),

    #[error("stream is empty after splitting")]
    EmptyStream,

    #[error("configs cannot be compared: {0}")]
    Incomparable(String),

    #[error("response set does not match schedule: {0}")]
    MisalignedResponses(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl std::fmt::Display, source: std::io::Error) -> Self {
        Error::Io {
            path: path.to_string(),
            source,
        }
    }

    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
