use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("loop arc at vertex {0}")]
    LoopArc(usize),
    #[error("vertex {vertex} out of range for order {n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("digraph must have at least {min} vertices, got {n}")]
    OrderTooSmall { n: usize, min: usize },
    #[error("digraph is not strongly connected")]
    NotStronglyConnected,
    #[error("arc ({0}, {1}) is not present")]
    ArcAbsent(usize, usize),
    #[error("vertex set must be nonempty")]
    EmptyVertexSet,
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("order {n} exceeds the configured cap {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("{0}")]
    InvalidBasis(String),
    #[error("embedding fails on arc ({from}, {to}), case {case}")]
    EmbeddingFailure { from: usize, to: usize, case: u8 },
}

pub type Result<T> = std::result::Result<T, Error>;
