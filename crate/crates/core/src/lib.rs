//! Certified lower and upper bounds on the total variation distance between
//! two multivariate Gaussians, plus exact and Monte Carlo reference values
//! to check them against.
//!
//! ```
//! use gaussian_tv::{assess, Gaussian, Tolerances};
//!
//! let p = Gaussian::univariate(0.0, 1.0).unwrap();
//! let q = Gaussian::univariate(1.0, 1.0).unwrap();
//! let report = assess(&p, &q, &Tolerances::default()).unwrap();
//! // equal variances: the exact value 2 Phi(1/2) - 1 pins the interval
//! assert!((report.best_lower - 0.382925).abs() < 1e-6);
//! assert!((report.best_upper - 0.382925).abs() < 1e-6);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod cli;
pub mod ensemble;
pub mod error;
pub mod gaussian;
pub mod normal;
pub mod oracle;

pub use bounds::{
    assess, assess_with, both_orders, bound_1d, bound_1d_symmetric, bound_diff_mean,
    bound_hellinger, bound_pinsker_kl, bound_same_mean, exact_equal_cov, hellinger_squared,
    BoundInterval, BoundReport, MeanGapDecomposition, Method, MethodSet, ReportFlag, Tolerances,
};
pub use ensemble::{generate, EnsembleKind, EnsembleSpec, GaussianPair};
pub use error::{Error, Result};
pub use gaussian::{
    affine_image, affine_support, complement_basis, detect_range, inverse_sqrt_on_range,
    relative_spectrum, same_range, whiten_sqrt, AffineSupport, Gaussian, RangeBasis, SpectralGap,
};
pub use oracle::{exact_tv_1d, mc_tv, oracle, OracleEstimate, OracleMethod};
