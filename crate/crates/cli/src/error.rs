use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed problem file; the message carries line and column.
    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    /// Well-formed input that the numerics reject up front.
    #[error("invalid problem: {0}")]
    Invalid(#[source] osccrit::Error),
    #[error("numerical failure: {0}")]
    Numeric(#[source] osccrit::Error),
}

impl CliError {
    /// 2 for anything wrong with the input, 3 when a computation fails.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. } | CliError::Io { .. } | CliError::Invalid(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }
}

impl From<osccrit::Error> for CliError {
    fn from(e: osccrit::Error) -> Self {
        use osccrit::Error as E;
        match e {
            E::InvalidParameter { .. }
            | E::InvalidInput(_)
            | E::Domain { .. }
            | E::OutOfRange { .. } => CliError::Invalid(e),
            _ => CliError::Numeric(e),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
