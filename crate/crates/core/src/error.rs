use thiserror::Error;

/// Errors raised while building or reading graphs.
#[derive(Debug, Error)]
pub enum GraphError {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("edge list contains no edges")]
    Empty,

    #[error("invalid weight {weight} on edge {tail} -> {head}")]
    InvalidWeight {
        tail: usize,
        head: usize,
        weight: f64,
    },

    #[error("vertex {vertex} out of range for graph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("vertex list must be sorted and unique (offending vertex {vertex})")]
    UnsortedVertices { vertex: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Errors raised by the numerical kernels and the componentwise driver.
#[derive(Debug, Error)]
pub enum SolveError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: operator has {expected} rows, vector has {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("start vector has no positive entry")]
    ZeroStart,

    #[error("centrality vector vanished: graph has no positive spectral mass")]
    Degenerate,

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error(transparent)]
    Graph(#[from] GraphError),
}

pub type Result<T, E = SolveError> = std::result::Result<T, E>;
