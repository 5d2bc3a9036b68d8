use thiserror::Error;

/// Errors raised by the sampling library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not square or has non-finite entries: {0}")]
    InvalidMatrix(String),

    #[error("matrix is not expansive: eigenvalue of modulus {modulus} <= 1 + {tolerance}")]
    NonExpansive { modulus: f64, tolerance: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("linear solve residual {residual:e} exceeds {tolerance:e}")]
    IllConditioned { residual: f64, tolerance: f64 },

    #[error("derivative estimate did not converge: levels disagree by {disagreement:e}")]
    NonConvergence { disagreement: f64 },

    #[error("moment defect {defect:e} exceeds {tolerance:e} at order {order}")]
    DefectCheckFailed { defect: f64, tolerance: f64, order: usize },

    #[error("symbol is not smooth at the origin: {0}")]
    NonSmoothSymbol(String),

    #[error("quadrature budget exceeded: {required} nodes requested, budget {budget}")]
    BudgetExceeded { required: usize, budget: usize },

    #[error("truncation cap exceeded: {required} lattice points requested, cap {cap}")]
    TruncationCapExceeded { required: usize, cap: usize },

    #[error("function evaluation failed at {0}")]
    EvaluationFailed(String),

    #[error("grid geometry mismatch: {0}")]
    GeometryMismatch(String),

    #[error("not enough usable rows for a fit: {usable} of at least 3")]
    InsufficientData { usable: usize },

    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
