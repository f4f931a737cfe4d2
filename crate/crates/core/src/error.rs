use thiserror::Error;

use crate::report::Report;

/// Every failure mode surfaced by the library.
///
/// `Schema` covers malformed input (unknown ids, missing table entries).
/// `Law` carries a non-empty report when a mathematical check failed where
/// a valid structure was required.
#[derive(Debug, Error)]
pub enum Error {
    #[error("schema error: {0}")]
    Schema(String),
    #[error("composition error: {0}")]
    Composition(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error("law violated: {0}")]
    Law(Report),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn schema(msg: impl Into<String>) -> Error {
    Error::Schema(msg.into())
}
