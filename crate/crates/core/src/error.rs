use thiserror::Error;

/// Errors raised by state construction, grid evaluation and relation checks.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("state is not normalized (norm² = {0})")]
    NotNormalized(f64),

    #[error("matrix is not Hermitian (max asymmetry {0:e})")]
    NotHermitian(f64),

    #[error("density matrix has negative eigenvalue {0:e}")]
    NotPositive(f64),

    #[error("mixture weights must be nonnegative and sum to 1 (sum = {0})")]
    InvalidWeights(f64),

    #[error("truncation insufficient: tail weight {tail:e} at nmax = {nmax}; need nmax ≥ {required}")]
    TruncationInsufficient {
        nmax: usize,
        required: usize,
        tail: f64,
    },

    #[error("grid too small: extent {extent} < required {required}")]
    GridTooSmall { extent: f64, required: f64 },

    #[error("grid inadequate: density integrates to {integral} (deviation {deviation:e})")]
    GridInadequate { integral: f64, deviation: f64 },

    #[error("density is not normalized (integral = {0})")]
    Unnormalized(f64),

    #[error("negative density value {0:e}")]
    NegativeDensity(f64),

    #[error("Wigner function is negative (min {min:e} < -{tolerance:e})")]
    WignerNegative { min: f64, tolerance: f64 },

    #[error("nonpositive variance {0}")]
    NonPositiveVariance(f64),

    #[error("degenerate covariance matrix (determinant {0:e})")]
    DegenerateCovariance(f64),

    #[error("unphysical covariance matrix: {0}")]
    Unphysical(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
