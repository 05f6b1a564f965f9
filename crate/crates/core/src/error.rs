//! The crate-wide error type.

use thiserror::Error;

/// Every failure the core can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("variable `{0}` is declared twice")]
    DuplicateVariable(String),
    #[error("context entry {position} (`{name}`) is ill-typed: {cause}")]
    IllTypedEntry {
        position: usize,
        name: String,
        cause: Box<Error>,
    },
    #[error("arrow endpoints are not parallel: {0}")]
    NotParallel(String),
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("not a pasting context (failed at entry {position})")]
    NotAPastingContext { position: usize },
    #[error("coherence is not full: {0}")]
    NotFull(String),
    #[error("substitution has {found} entries, expected {expected}")]
    SubstitutionArity { expected: usize, found: usize },
    #[error("substitution entry {position} does not match the domain variable `{expected}`")]
    SubstitutionOrder { position: usize, expected: String },
    #[error("type mismatch: expected `{expected}`, found `{found}`")]
    TypeMismatch { expected: String, found: String },
    #[error("boundaries do not agree for grafting: {0}")]
    BoundaryMismatch(String),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("variable set is not up-closed: `{0}` is missing")]
    NotUpClosed(String),
    #[error("naturality depth {0} exceeds the supported depth 1")]
    DepthExceeded(usize),
    #[error("phases do not compose: {0}")]
    PhasesNotComposable(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("faces do not agree: {0}")]
    FacesMismatch(String),
    #[error("unsupported indices: {0}")]
    UnsupportedIndices(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
