use thiserror::Error;

use crate::verify::VerificationReport;

/// Errors produced by the ledger engine.
#[derive(Error, Debug)]
pub enum LedgerError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("out of range: {0}")]
    OutOfRange(String),

    #[error("duplicate transaction id {tx_id:?}")]
    DuplicateTransaction { tx_id: String },

    #[error("not found: {0}")]
    NotFound(String),

    #[error("forbidden: {0}")]
    Forbidden(String),

    #[error("unguarded scope: {0}")]
    UnguardedScope(String),

    #[error("duplicate vote by {voter}")]
    DuplicateVote { voter: String },

    #[error("{voter} is not an endorser of this request")]
    NotAnEndorser { voter: String },

    #[error("corrupt layout at {path}: {detail}")]
    CorruptLayout { path: String, detail: String },

    #[error("integrity failure: {} violation(s)", report.violations.len())]
    IntegrityFailure { report: VerificationReport },

    #[error("i/o error at {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, LedgerError>;
