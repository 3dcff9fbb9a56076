use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix must have dimension at least {min}, got {dim}")]
    DimensionTooSmall { dim: usize, min: usize },

    #[error("dimension {dim} exceeds the supported maximum {max}")]
    DimensionTooLarge { dim: usize, max: usize },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not Hermitian: relative asymmetry {asymmetry:e}")]
    NotHermitian { asymmetry: f64 },

    #[error("matrix is not positive semidefinite: smallest eigenvalue {min_eig:e}")]
    NotPsd { min_eig: f64 },

    #[error("vector is not a unit vector (norm {norm})")]
    NotUnit { norm: f64 },

    #[error("expected rank {expected}, found rank {found}")]
    RankPrecondition { expected: usize, found: usize },

    #[error("vectors are not orthonormal (deviation {deviation:e})")]
    NotOrthonormal { deviation: f64 },

    #[error("matrix is singular or too ill-conditioned (smallest singular value {sigma_min:e})")]
    Singular { sigma_min: f64 },

    #[error("invalid tolerances: {0}")]
    InvalidTolerances(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    #[error("oracle is not an order-automorphism: {0}")]
    OracleNotAutomorphic(String),

    #[error("oracle transport failure: {0}")]
    Transport(String),

    #[error("counterexample search exhausted after {trials} trials")]
    SearchExhausted { trials: usize },

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),

    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
