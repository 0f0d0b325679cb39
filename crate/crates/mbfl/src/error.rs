use std::io;
use std::path::PathBuf;

use mbfl_core::evaluation::EvaluationError;
use mbfl_core::execution::ExecutionError;
use mbfl_core::minilang::{ParseError, SuiteError};
use mbfl_core::mutation::EditError;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("cannot read {}: {source}", path.display())]
    Read { path: PathBuf, source: io::Error },
    #[error("cannot write {}: {source}", path.display())]
    Write { path: PathBuf, source: io::Error },
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{}:{line}: {message}", path.display())]
    Format { path: PathBuf, line: usize, message: String },
    #[error("{}: {source}", path.display())]
    Suite { path: PathBuf, source: SuiteError },
    #[error("{}: {source}", path.display())]
    Edit { path: PathBuf, source: EditError },
    #[error("{}: {source}", path.display())]
    Json { path: PathBuf, source: serde_json::Error },
    #[error("refusing to localize: {0}")]
    Refused(ExecutionError),
    #[error(transparent)]
    Evaluation(#[from] EvaluationError),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Internal(String),
}

impl From<ExecutionError> for Error {
    fn from(e: ExecutionError) -> Self {
        match e {
            ExecutionError::Suite(s) => Error::Usage(s.to_string()),
            ExecutionError::TestMismatch => Error::Usage(e.to_string()),
            ExecutionError::NoFailingTests | ExecutionError::NoPassingTests => Error::Refused(e),
        }
    }
}

impl Error {
    pub(crate) fn format(path: impl Into<PathBuf>, line: usize, message: impl Into<String>) -> Error {
        Error::Format { path: path.into(), line, message: message.into() }
    }

    /// 1 for bad input, 2 when localization is refused, 3 for anything else.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Read { .. }
            | Error::Parse(_)
            | Error::Format { .. }
            | Error::Suite { .. }
            | Error::Edit { .. }
            | Error::Evaluation(_)
            | Error::Usage(_) => 1,
            Error::Refused(_) => 2,
            Error::Write { .. } | Error::Json { .. } | Error::Internal(_) => 3,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
