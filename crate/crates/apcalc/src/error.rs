//! Error type shared by every module of the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong while analysing or verifying sequences.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// The input is too short for the requested operation.
    #[error("insufficient data: {0}")]
    InsufficientData(String),

    /// No order up to `h_max` could be certified on the available horizon.
    #[error("not an arithmetic progression of order <= {h_max} on this horizon")]
    NotAnAp {
        /// Largest order that was tested.
        h_max: usize,
    },

    /// The horizon is too short to decide the question either way.
    #[error("inconclusive: {0}")]
    Inconclusive(String),

    /// Malformed or out-of-range input.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A theorem hypothesis failed on the given instance.
    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),

    /// A verified claim failed; carries a witness description.
    #[error("claim violated: {0}")]
    ClaimViolated(String),

    /// The requested evaluation form does not apply to this element kind.
    #[error("unsupported form: {0}")]
    UnsupportedForm(String),

    /// Cross-checked invariants disagreed; indicates a bug or tolerance misconfiguration.
    #[error("internal consistency failure: {0}")]
    InternalInconsistency(String),
}

impl Error {
    /// True for the two variants that mean "the horizon cannot decide".
    pub fn is_inconclusive(&self) -> bool {
        matches!(self, Error::Inconclusive(_))
    }
}
