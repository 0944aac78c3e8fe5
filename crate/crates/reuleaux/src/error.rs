use thiserror::Error;

/// Errors shared by all toolkit operations.
#[derive(Debug, Error)]
pub enum Error {
    /// A caller-supplied argument is invalid (wrong size, unknown label, bad range...).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// An operation precondition does not hold for this input.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Input exceeds a hard size cap.
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    /// Geometry too degenerate to resolve at the configured tolerance.
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// A local operation was tried on an edge/vertex where it does not apply;
    /// the caller may retry elsewhere.
    #[error("operation rejected: {0}")]
    Rejected(String),

    /// A result contradicts an invariant the theory guarantees. Surfaced loudly.
    #[error("internal consistency failure: {0}")]
    InternalConsistency(String),

    #[error("schema error: {0}")]
    Schema(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
