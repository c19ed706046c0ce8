use thiserror::Error;

/// Errors raised across geometry construction, assembly, solving and reporting.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid geometry: {0}")]
    Geometry(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("boundary specification has {got} tags but the domain has {expected} sides")]
    BoundaryMismatch { expected: usize, got: usize },

    #[error("every degree of freedom is constrained; nothing left to solve")]
    FullyConstrained,

    #[error("requested {requested} eigenpairs but the system has dimension {dimension}")]
    Dimension { requested: usize, dimension: usize },

    #[error("eigensolver did not converge after {iterations} expansions; best residuals {residuals:?}")]
    NonConvergence {
        iterations: usize,
        residuals: Vec<f64>,
    },

    #[error("linear algebra failure: {0}")]
    Linalg(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("function is numerically zero")]
    ZeroFunction,

    #[error("symmetry classification failed: scores {long:.4} / {short:.4} are not close to +-1")]
    Classification { long: f64, short: f64 },

    #[error("unknown export format `{0}`")]
    UnknownFormat(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
