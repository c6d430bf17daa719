use thiserror::Error;

/// Broad failure classes, used by front ends to pick exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorCategory {
    Parse,
    Validation,
    Precondition,
    Internal,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("line {line}: vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange { line: usize, vertex: i64, n: usize },

    #[error("line {line}: edge weight must be a positive integer")]
    NonPositiveWeight { line: usize },

    #[error("vertex {vertex} out of range (n = {n})")]
    BadVertex { vertex: usize, n: usize },

    #[error("graph is disconnected")]
    Disconnected,

    #[error("vertex set must be nonempty")]
    EmptySet,

    #[error("dimension must be at least 1")]
    ZeroDimension,

    #[error("dimension {dim} exceeds the configured cap {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("expected a {expected}-dimensional vector, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("coordinate {0} is outside the finite range accepted by the index")]
    NonFiniteCoordinate(i64),

    #[error("{count} apices exceed the cap of {cap}; use the clique-sum or naive path")]
    ApexCap { count: usize, cap: usize },

    #[error("instance with {n} vertices exceeds the cap of {cap}")]
    CapExceeded { n: usize, cap: usize },

    #[error("partition side {0} is empty")]
    EmptySide(&'static str),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("size guard: {0}")]
    SizeGuard(String),
}

impl Error {
    pub fn category(&self) -> ErrorCategory {
        match self {
            Error::Parse { .. } | Error::VertexOutOfRange { .. } | Error::NonPositiveWeight { .. } => {
                ErrorCategory::Parse
            }
            Error::Validation(_) => ErrorCategory::Validation,
            Error::BadVertex { .. }
            | Error::Disconnected
            | Error::EmptySet
            | Error::ZeroDimension
            | Error::DimensionCap { .. }
            | Error::DimensionMismatch { .. }
            | Error::NonFiniteCoordinate(_)
            | Error::ApexCap { .. }
            | Error::CapExceeded { .. }
            | Error::EmptySide(_)
            | Error::Precondition(_)
            | Error::SizeGuard(_) => ErrorCategory::Precondition,
        }
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
