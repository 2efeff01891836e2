use thiserror::Error;

/// Errors produced while building Gaussians or evaluating bounds and oracles.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("a Gaussian needs dimension at least 1")]
    EmptyDimension,

    #[error("covariance row {row} has {found} entries, expected {expected}")]
    RaggedCovariance {
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("non-finite value at {location}")]
    NonFinite { location: String },

    #[error(
        "covariance is not symmetric: entry ({row}, {col}) = {value} but ({col}, {row}) = {mirror}"
    )]
    NotSymmetric {
        row: usize,
        col: usize,
        value: f64,
        mirror: f64,
    },

    #[error("covariance is not positive semidefinite: eigenvalue {eigenvalue} below -{threshold}")]
    NotPositiveSemidefinite { eigenvalue: f64, threshold: f64 },

    #[error("covariance has no eigenvalue above the rank threshold")]
    ZeroCovariance,

    #[error("covariance is not positive definite (min eigenvalue {min_eigenvalue}, threshold {threshold})")]
    NotPositiveDefinite { min_eigenvalue: f64, threshold: f64 },

    #[error("vector has zero norm")]
    ZeroVector,

    #[error("covariance ranges differ")]
    RangeMismatch,

    #[error("means coincide; use the same-mean bound")]
    SameMean,

    #[error("one-dimensional input; use the one-dimensional bound")]
    OneDimensional,

    #[error("v^T Sigma1 v is numerically zero relative to |v|^2 lambda_max(Sigma1)")]
    NearSingular,

    #[error("variance must be positive")]
    ZeroVariance,

    #[error("affine supports differ")]
    SupportMismatch,

    #[error("tolerance {value} outside (0, 1)")]
    InvalidTolerance { value: f64 },

    #[error("at least {min} samples required, got {got}")]
    TooFewSamples { min: usize, got: usize },

    #[error("invalid ensemble spec: {0}")]
    InvalidSpec(String),

    #[error("merged bounds are inconsistent: lower {lower} > upper {upper}")]
    InconsistentBounds { lower: f64, upper: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
