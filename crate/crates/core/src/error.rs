//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or out-of-contract input (non-finite coordinates,
    /// non-positive radii, unknown registry names, bad expressions, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// An operation was asked to evaluate outside its domain, e.g. a barrier
    /// subgradient at a point with gauge ≥ 1.
    #[error("out of domain: {0}")]
    OutOfDomain(String),

    /// A graph operation received (or produced) an empty subgradient graph.
    #[error("empty subgradient graph: {0}")]
    EmptyGraph(String),

    /// A stated precondition failed; `slack` measures by how much.
    #[error("precondition violated: {what} (slack {slack:.6e})")]
    Precondition { what: String, slack: f64 },

    /// Invariant breakage that should be impossible for validated inputs.
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
