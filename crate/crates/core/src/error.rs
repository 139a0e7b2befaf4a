use std::io;

use thiserror::Error;

use crate::graph::PatternLabel;

#[derive(Debug, Error)]
pub enum Error {
    #[error("self-loop on node {0} is not allowed")]
    SelfLoop(usize),

    #[error("node index {index} out of range for graph with {node_count} nodes")]
    NodeOutOfRange { index: usize, node_count: usize },

    #[error("line {line}: field `{field}`: {message}")]
    Parse {
        line: usize,
        field: String,
        message: String,
    },

    #[error("invalid parameter `{name}`: {message}")]
    InvalidParam { name: String, message: String },

    #[error("dimension mismatch in {op}: {detail}")]
    Dimension { op: &'static str, detail: String },

    #[error("singular system while computing {0}")]
    Singular(&'static str),

    #[error("empty {0}")]
    Empty(&'static str),

    #[error("training set mixes labels {expected} and {found}")]
    MixedLabels {
        expected: PatternLabel,
        found: PatternLabel,
    },

    #[error("model for {0} has no calibrated threshold; run `train` first")]
    Uncalibrated(PatternLabel),

    #[error("missing {what} for patterns: {patterns}")]
    MissingPatterns { what: &'static str, patterns: String },

    #[error("missing columns: {0}")]
    MissingColumns(String),

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn param(name: impl Into<String>, message: impl Into<String>) -> Self {
        Error::InvalidParam {
            name: name.into(),
            message: message.into(),
        }
    }
}
