use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("graph has {0} vertices; at most {max} are supported", max = crate::graph::MAX_VERTICES)]
    TooManyVertices(usize),
    #[error("duplicate vertex label {0:?}")]
    DuplicateLabel(String),
    #[error("unknown vertex label {0:?}")]
    UnknownLabel(String),
    #[error("vertex index {0} out of range")]
    VertexOutOfRange(usize),
    #[error("self-loop on vertex {0:?}")]
    SelfLoop(String),
    #[error("vertex set must be nonempty")]
    EmptySet,
    #[error("invalid family parameters: {0}")]
    BadParameters(String),
    #[error("vertex count mismatch: {0} vs {1}")]
    VertexCountMismatch(usize, usize),
    #[error("enumeration cap exceeded: {needed} checks requested, cap is {cap}")]
    CapExceeded { needed: u64, cap: u64 },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
