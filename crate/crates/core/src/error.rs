use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("grid needs at least 3 points, got {0}")]
    GridTooShort(usize),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("non-finite sample at index {0}")]
    NonFinite(usize),

    #[error("inputs are sampled on different grids")]
    GridMismatch,

    #[error("invalid warping: {0}")]
    InvalidWarping(String),

    #[error("warping derivative {value} < 0 at index {index}")]
    NegativeDerivative { index: usize, value: f64 },

    #[error("square-root transform has zero norm")]
    ZeroNorm,

    #[error("vector is not tangent to the base point (inner product {0})")]
    NotTangent(f64),

    #[error("points are antipodal on the sphere (angle {0})")]
    Antipodal(f64),

    #[error("spline needs strictly increasing times: {0}")]
    InvalidTimes(String),

    #[error("need at least {required} samples, got {actual}")]
    TooFewSamples { required: usize, actual: usize },

    #[error("degenerate spread: fewer than two central members away from the median")]
    Degenerate,

    #[error("{what} did not converge after {iterations} iterations")]
    NonConvergence { what: &'static str, iterations: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("panicked: {0}")]
    Panicked(String),
}

pub type Result<T> = std::result::Result<T, Error>;
