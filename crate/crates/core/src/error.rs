use thiserror::Error;

use crate::measurement::OptimizationResult;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max asymmetry {residual:e})")]
    NotHermitian { residual: f64 },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("Jacobi iteration did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("matrix is not positive semidefinite (eigenvalue {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("Schatten exponent must be positive, got {0}")]
    InvalidP(f64),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("outcome count {outcomes} does not match state count {states}")]
    CountMismatch { outcomes: usize, states: usize },

    #[error("invalid priors: {0}")]
    BadPriors(String),

    #[error("state {index} is not a density matrix: {reason}")]
    BadState { index: usize, reason: String },

    #[error("ensemble must contain at least one state")]
    EmptyEnsemble,

    #[error("dimension {dim}^{power} exceeds the size cap {cap}")]
    TooLarge { dim: usize, power: u32, cap: usize },

    #[error("invalid POVM: {0}")]
    BadPovm(String),

    #[error("exactly two states required, found {0}")]
    NotTwoStates(usize),

    #[error("priors must be uniform for this bound")]
    NonUniformPriors,

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("state {0} is not pure")]
    NotPureStates(usize),

    #[error("at least two states required, found {0}")]
    TooFewStates(usize),

    #[error("optimizer stopped after {} iterations with dual gap {:e}", .0.iterations, .0.dual_gap)]
    NotCertified(Box<OptimizationResult>),

    #[error("parse error at `{path}`: {message}")]
    Parse { path: String, message: String },

    #[error("validation error at `{path}`: {message}")]
    Validation { path: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors caused by malformed or invalid input data, as opposed
    /// to numerical failures inside an algorithm.
    pub fn is_input_error(&self) -> bool {
        !matches!(self, Error::NoConvergence { .. } | Error::NotCertified(_))
    }
}
