use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("operation requires square matrices")]
    NotSquare,
    #[error("cannot normalize the zero vector")]
    ZeroVector,
    #[error("operator is not involutory (max |A^2 - 1| = {0:e})")]
    NotInvolutory(f64),
    #[error("basis vector {index} is not an eigenvector of the {context} operator")]
    NotEigenvector { index: usize, context: String },
    #[error("eigenvalues must be pairwise distinct ({0} repeats)")]
    RepeatedEigenvalue(f64),
    #[error("state is not normalized (norm^2 = {0})")]
    NotNormalized(f64),
    #[error("invalid context distribution: {0}")]
    InvalidDistribution(String),
    #[error("invalid target string {0:?}: expected 4 characters over {{+,-}}")]
    InvalidTargets(String),
    #[error("invalid context label {0:?}")]
    InvalidContext(String),
    #[error("observable {0} appears an odd number of times; the parity argument does not apply")]
    OddMultiplicity(String),
    #[error("game is not supported here: {0}")]
    UnsupportedGame(String),
    #[error("invalid hypergraph: {0}")]
    InvalidHypergraph(String),
    #[error("state list is not separating: atoms {0} and {1} share every value")]
    NotSeparating(usize, usize),
    #[error("invalid two-valued state: {0}")]
    InvalidState(String),
    #[error("ball {0} not found in the requested context")]
    BallNotFound(usize),
    #[error("unknown export format {0:?}")]
    UnknownFormat(String),
    #[error("json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
