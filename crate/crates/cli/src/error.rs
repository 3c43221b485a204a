use std::path::PathBuf;

use thiserror::Error;

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid document: {0}")]
    Document(String),
    #[error("{0}")]
    Usage(String),
    #[error("check failed: {0}")]
    Check(String),
    #[error("decompositions differ: {0}")]
    NotEquivalent(String),
    #[error(transparent)]
    Core(#[from] ddpd_core::Error),
}

impl CliError {
    /// Process exit status: 1 parse, 2 invariant, 3 cap, 4 retry, 5 not equivalent.
    pub fn exit_code(&self) -> i32 {
        use ddpd_core::Error as E;
        match self {
            Self::Io { .. } | Self::Parse { .. } | Self::Document(_) | Self::Usage(_) => 1,
            Self::Check(_) => 2,
            Self::NotEquivalent(_) => 5,
            Self::Core(e) => match e {
                E::Parse { .. }
                | E::DegreeMismatch { .. }
                | E::PointOutOfRange { .. }
                | E::IndexOutOfRange { .. }
                | E::MalformedPartition(_)
                | E::InvalidInstance(_) => 1,
                E::OrbitCap { .. } | E::OrderCap { .. } | E::Timeout => 3,
                E::RetryBudget { .. } => 4,
                _ => 2,
            },
        }
    }
}
