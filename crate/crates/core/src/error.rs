use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A compact-set sample that must be non-empty was empty.
    #[error("empty point cloud: {0}")]
    EmptyCloud(&'static str),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("point cloud rejected: {0}")]
    InvalidCloud(String),

    /// `p(0,0) == a`, so the normalization `(p - a)/(p(0,0) - a)` does not exist.
    #[error("degenerate scale: p(0,0) equals the target value {0}")]
    DegenerateScale(String),

    /// Evaluation left the range of `f64`.
    #[error("range error: {0}")]
    Range(String),

    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error("budget exhausted: {0}")]
    Budget(String),

    /// The boundary sample of the limit set is empty at the requested tolerance.
    #[error("empty boundary sample: {0}")]
    EmptyBoundary(String),

    #[error("rank-deficient fit (condition estimate {condition:e}): {reason}")]
    RankDeficient { condition: f64, reason: String },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("parse error in {what}: {reason}")]
    Parse { what: String, reason: String },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(what: impl Into<String>, reason: impl ToString) -> Self {
        Error::Parse {
            what: what.into(),
            reason: reason.to_string(),
        }
    }

    /// Process exit status used by the command-line front end.
    ///
    /// 2 = invariant failure, 3 = budget, 4 = I/O, 5 = configuration.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Budget(_) => 3,
            Error::Io { .. } | Error::Parse { .. } => 4,
            Error::Config(_) | Error::InvalidParameter(_) => 5,
            _ => 2,
        }
    }
}
