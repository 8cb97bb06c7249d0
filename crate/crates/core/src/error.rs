use thiserror::Error;

use crate::trial::TrialKey;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Broad failure class, used by front ends to pick an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorCategory {
    /// Bad files, bad arguments, inconsistent inputs.
    Input,
    /// Inputs were well formed but a metric could not be evaluated.
    Evaluation,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid input: {0}")]
    Input(String),

    #[error("{total} trial(s) have no score, e.g. {}", format_keys(.sample))]
    MissingScores { total: usize, sample: Vec<TrialKey> },

    #[error("key mismatch: {0}")]
    KeyMismatch(String),

    #[error("evaluation error: {0}")]
    Evaluation(String),

    #[error("model error: {0}")]
    Model(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    pub fn category(&self) -> ErrorCategory {
        match self {
            Error::Evaluation(_) => ErrorCategory::Evaluation,
            _ => ErrorCategory::Input,
        }
    }
}

fn format_keys(keys: &[TrialKey]) -> String {
    keys.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(", ")
}
