use thiserror::Error;

use crate::field::Representation;
use crate::ode::FailureKind;

/// Error type shared by all modules of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("field is in the wrong representation (expected {expected:?})")]
    WrongRepresentation { expected: Representation },

    #[error("integration failed at t = {t}: {kind}")]
    Integration { t: f64, kind: FailureKind },

    #[error("ξ-column {column} (ξ = {xi}) failed: {source}")]
    Column {
        column: usize,
        xi: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("event not found before t = {t_max}")]
    EventNotFound { t_max: f64 },

    #[error("dense output does not cover t = {t}")]
    DenseRange { t: f64 },

    #[error("no-wrap precondition violated: {0}")]
    NoWrap(String),

    #[error("snapshot format: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
