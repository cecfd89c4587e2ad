use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("arity error: expected {expected} degrees, got {got}")]
    Arity { expected: usize, got: usize },

    #[error("determinantality error: {0}")]
    DeterminantalityError(String),

    #[error("invalid shape: {0}")]
    InvalidShape(String),

    #[error("invalid determinantal data: {0}")]
    InvalidData(String),

    #[error("numeric mode requires coefficient tables for every polynomial")]
    MissingCoefficients,

    #[error("subset enumeration limited to N <= {limit}, system has N = {n}")]
    TooLarge { n: usize, limit: usize },

    #[error("singular matrix in linear solve")]
    Singular,

    #[error("C11 block is singular; the MEP is not in affine position")]
    NotAffine,

    #[error("singular MEP: no affine position found after coordinate-change retries")]
    SingularMEP,

    #[error("clustered eigenvalues persist after f0 retries; multiplicities are unsupported")]
    MultiplicityUnsupported,

    #[error("eigenvector has no usable pivot entry")]
    DegenerateEigenvector,

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("eigensolver failed to converge")]
    EigenConvergence,

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
