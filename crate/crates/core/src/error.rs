use thiserror::Error;

/// Errors raised by the numerical routines in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("invalid bond between {i} and {j}: {reason}")]
    InvalidBond { i: usize, j: usize, reason: String },

    #[error("simple root index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("cannot reflect in an isotropic vector")]
    IsotropicAxis,

    #[error("root enumeration exceeded {limit} roots")]
    TooManyRoots { limit: usize },

    #[error("requested depth {requested} exceeds the depth cap {cap}")]
    DepthCapExceeded { requested: usize, cap: usize },

    #[error("the Coxeter graph restricted to {subset:?} is disconnected")]
    Disconnected { subset: Vec<usize> },

    #[error("subset {subset:?} is not of affine type")]
    NotAffine { subset: Vec<usize> },

    #[error("degenerate spectrum: {0}")]
    DegenerateSpectrum(String),

    #[error("budget of {budget} exhausted: {context}")]
    BudgetExhausted { budget: usize, context: String },

    #[error("vector lies on the hyperplane of coordinate sum zero")]
    ZeroCoordinateSum,

    #[error("point is not isotropic: (v, v) = {value:e}")]
    NotIsotropic { value: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
