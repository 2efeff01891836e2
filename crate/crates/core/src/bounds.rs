//! Closed-form bounds on the total variation distance between two Gaussians.
//!
//! Each `bound_*` function evaluates one certified interval in the argument
//! order it is given. Several of the bounds are asymmetric in their
//! arguments while the distance itself is symmetric, so [`both_orders`]
//! evaluates a bound in each order and intersects the two intervals;
//! [`assess`] always does this before merging.
//!
//! | method | lower | upper |
//! |--------|-------|-------|
//! | same mean | `min{1,rho}/100` | `(3/2) min{1,rho}` |
//! | different means, `d > 1` | `min{1,T}/200` | `(9/2) min{1,T}` |
//! | one-dimensional | see [`bound_1d`] | see [`bound_1d`] |
//! | Pinsker | `0` | `sqrt(KL/2)` |
//! | Hellinger | `h^2` | `h sqrt(2 - h^2)` |
//!
//! Every upper bound is clipped to 1 and every lower bound to 0.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian::{
    affine_image, affine_support, complement_basis, detect_range, inverse_sqrt_pd, relative_eigen,
    relative_spectrum, same_range, Gaussian, SpectralGap, DEFAULT_RANGE_TOL, DEFAULT_RANK_TOL,
};
use crate::normal;

/// `||S1 - S2||_F <= EQUAL_COV_TOL * max(||S1||_F, ||S2||_F)` enables the exact formula.
pub const EQUAL_COV_TOL: f64 = 1e-10;

/// `v^T S1 v <= NEAR_SINGULAR_TOL * |v|^2 * lambda_max(S1)` disables the different-mean bound.
pub const NEAR_SINGULAR_TOL: f64 = 1e-12;

/// Round-off allowed when a merged lower bound exceeds a merged upper bound.
pub const CONSISTENCY_SLACK: f64 = 1e-9;

const SAME_MEAN_LOWER: f64 = 1.0 / 100.0;
const SAME_MEAN_UPPER: f64 = 3.0 / 2.0;
const DIFF_MEAN_LOWER: f64 = 1.0 / 200.0;
const DIFF_MEAN_UPPER: f64 = 9.0 / 2.0;
const ONE_DIM_LOWER: f64 = 1.0 / 200.0;
const ONE_DIM_MEAN_WEIGHT: f64 = 40.0;

/// Numerical tolerances shared by the bounds and the oracles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub rank_tol: f64,
    pub range_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            rank_tol: DEFAULT_RANK_TOL,
            range_tol: DEFAULT_RANGE_TOL,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Method {
    SameMeanThm1,
    DiffMeanThm2,
    OneDimThm3,
    PinskerKL,
    Hellinger,
    EqualCovExact,
    DisjointSupport,
}

impl Method {
    pub const ALL: [Method; 7] = [
        Method::SameMeanThm1,
        Method::DiffMeanThm2,
        Method::OneDimThm3,
        Method::PinskerKL,
        Method::Hellinger,
        Method::EqualCovExact,
        Method::DisjointSupport,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::SameMeanThm1 => "SameMeanThm1",
            Method::DiffMeanThm2 => "DiffMeanThm2",
            Method::OneDimThm3 => "OneDimThm3",
            Method::PinskerKL => "PinskerKL",
            Method::Hellinger => "Hellinger",
            Method::EqualCovExact => "EqualCovExact",
            Method::DisjointSupport => "DisjointSupport",
        }
    }

    fn bit(self) -> u8 {
        1 << (self as u8)
    }
}

/// Subset of [`Method`]s to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MethodSet(u8);

impl MethodSet {
    pub fn all() -> Self {
        Method::ALL.into_iter().collect()
    }

    pub fn empty() -> Self {
        Self(0)
    }

    pub fn insert(&mut self, m: Method) {
        self.0 |= m.bit();
    }

    pub fn contains(&self, m: Method) -> bool {
        self.0 & m.bit() != 0
    }
}

impl Default for MethodSet {
    fn default() -> Self {
        Self::all()
    }
}

impl FromIterator<Method> for MethodSet {
    fn from_iter<I: IntoIterator<Item = Method>>(iter: I) -> Self {
        let mut set = Self::empty();
        for m in iter {
            set.insert(m);
        }
        set
    }
}

/// A certified `[lower, upper]` interval for the TV distance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundInterval {
    pub method: Method,
    pub lower: f64,
    pub upper: f64,
}

impl BoundInterval {
    /// Clips to `0 <= lower`, `upper <= 1`.
    pub fn new(method: Method, lower: f64, upper: f64) -> Self {
        Self {
            method,
            lower: lower.clamp(0.0, 1.0),
            upper: upper.clamp(0.0, 1.0),
        }
    }

    pub fn exact(method: Method, value: f64) -> Self {
        Self::new(method, value, value)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    /// Keeps the larger lower and smaller upper bound.
    pub fn intersect(&self, other: &BoundInterval) -> BoundInterval {
        BoundInterval {
            method: self.method,
            lower: self.lower.max(other.lower),
            upper: self.upper.min(other.upper),
        }
    }
}

/// Evaluates an asymmetric bound as `f(a, b)` and `f(b, a)` and intersects.
pub fn both_orders<T: ?Sized>(
    a: &T,
    b: &T,
    bound: impl Fn(&T, &T) -> Result<BoundInterval>,
) -> Result<BoundInterval> {
    let forward = bound(a, b)?;
    let reverse = bound(b, a)?;
    Ok(forward.intersect(&reverse))
}

/// `[min{1,rho}/100, min{1, (3/2) min{1,rho}}]`.
pub fn same_mean_interval(rho: f64) -> BoundInterval {
    let capped = rho.min(1.0);
    BoundInterval::new(
        Method::SameMeanThm1,
        SAME_MEAN_LOWER * capped,
        SAME_MEAN_UPPER * capped,
    )
}

/// `[min{1,T}/200, min{1, (9/2) min{1,T}}]`.
pub fn diff_mean_interval(t: f64) -> BoundInterval {
    let capped = t.min(1.0);
    BoundInterval::new(
        Method::DiffMeanThm2,
        DIFF_MEAN_LOWER * capped,
        DIFF_MEAN_UPPER * capped,
    )
}

fn check_dims(a: usize, b: usize) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            expected: a,
            found: b,
        })
    }
}

fn is_pd(m: &DMatrix<f64>, rank_tol: f64) -> bool {
    let eig = SymmetricEigen::new(m.clone());
    let max = eig.eigenvalues.max();
    max > 0.0 && eig.eigenvalues.min() > rank_tol * max
}

/// Relative spectrum used by the same-mean bound: directly for positive
/// definite pairs, otherwise after restricting both covariances to their
/// common range.
pub fn same_mean_spectrum(
    sigma1: &DMatrix<f64>,
    sigma2: &DMatrix<f64>,
    tol: &Tolerances,
) -> Result<SpectralGap> {
    check_dims(sigma1.nrows(), sigma2.nrows())?;
    if is_pd(sigma1, tol.rank_tol) && is_pd(sigma2, tol.rank_tol) {
        return relative_spectrum(sigma1, sigma2, tol.rank_tol);
    }
    let r1 = detect_range(sigma1, tol.rank_tol)?;
    let r2 = detect_range(sigma2, tol.rank_tol)?;
    if !same_range(&r1, &r2, tol.range_tol) {
        return Err(Error::RangeMismatch);
    }
    let pi = r1.basis();
    let p1 = pi.transpose() * sigma1 * pi;
    let p2 = pi.transpose() * sigma2 * pi;
    relative_spectrum(&p1, &p2, tol.rank_tol)
}

/// Same-mean bound for `N(mu, sigma1)` vs `N(mu, sigma2)`, with `rho` the
/// root-sum-square of the eigenvalues of `sigma1^{-1} sigma2 - I` (or of the
/// range-restricted pair when both are singular with a common range).
pub fn bound_same_mean(
    sigma1: &DMatrix<f64>,
    sigma2: &DMatrix<f64>,
    tol: &Tolerances,
) -> Result<BoundInterval> {
    Ok(same_mean_interval(
        same_mean_spectrum(sigma1, sigma2, tol)?.rho,
    ))
}

/// The split of a mean gap `v = mu1 - mu2` into the direction of `v` and
/// its orthogonal complement, with the three terms whose maximum drives the
/// different-mean bound.
#[derive(Debug, Clone, PartialEq)]
pub struct MeanGapDecomposition {
    pub v: DVector<f64>,
    /// Midpoint `(mu1 + mu2) / 2`.
    pub u: DVector<f64>,
    /// Orthonormal basis of the hyperplane orthogonal to `v`.
    pub pi: DMatrix<f64>,
    /// `|v^T (S1 - S2) v| / v^T S1 v`
    pub term_var: f64,
    /// `v^T v / sqrt(v^T S1 v)`
    pub term_mean: f64,
    /// `rho` of the complement-restricted covariances.
    pub term_spec: f64,
}

impl MeanGapDecomposition {
    pub fn new(g1: &Gaussian, g2: &Gaussian, tol: &Tolerances) -> Result<Self> {
        let v = g1.mean() - g2.mean();
        let pi = complement_basis(&v).map_err(|e| match e {
            Error::DimensionMismatch { .. } => Error::OneDimensional,
            Error::ZeroVector => Error::SameMean,
            other => other,
        })?;
        Self::with_basis(g1, g2, pi, tol)
    }

    /// Same as [`MeanGapDecomposition::new`] with a caller-supplied complement basis.
    pub fn with_basis(
        g1: &Gaussian,
        g2: &Gaussian,
        pi: DMatrix<f64>,
        tol: &Tolerances,
    ) -> Result<Self> {
        check_dims(g1.dim(), g2.dim())?;
        if g1.dim() < 2 {
            return Err(Error::OneDimensional);
        }
        let v = g1.mean() - g2.mean();
        let vv = v.dot(&v);
        if vv == 0.0 {
            return Err(Error::SameMean);
        }
        check_dims(g1.dim(), pi.nrows())?;
        check_dims(g1.dim() - 1, pi.ncols())?;
        let s1 = g1.cov();
        let s2 = g2.cov();
        let lambda_max = SymmetricEigen::new(s1.clone()).eigenvalues.max();
        let vs1v = (s1 * &v).dot(&v);
        if vs1v <= NEAR_SINGULAR_TOL * vv * lambda_max {
            return Err(Error::NearSingular);
        }
        let vs2v = (s2 * &v).dot(&v);
        let term_var = (vs1v - vs2v).abs() / vs1v;
        let term_mean = vv / vs1v.sqrt();
        let p1 = pi.transpose() * s1 * &pi;
        let p2 = pi.transpose() * s2 * &pi;
        let term_spec = relative_spectrum(&p1, &p2, tol.rank_tol)?.rho;
        Ok(Self {
            u: (g1.mean() + g2.mean()) * 0.5,
            v,
            pi,
            term_var,
            term_mean,
            term_spec,
        })
    }

    /// `max{term_var, term_mean, term_spec}`.
    pub fn tv_term(&self) -> f64 {
        self.term_var.max(self.term_mean).max(self.term_spec)
    }

    /// `P = I - v v^T / v^T v`.
    pub fn projector(&self) -> DMatrix<f64> {
        let d = self.v.len();
        DMatrix::identity(d, d) - (&self.v * self.v.transpose()) / self.v.dot(&self.v)
    }

    /// Coordinate of `w - u` along `v`, in units of `v`.
    pub fn along(&self, w: &DVector<f64>) -> f64 {
        (w - &self.u).dot(&self.v) / self.v.dot(&self.v)
    }

    /// Component of `w - u` orthogonal to `v`.
    pub fn across(&self, w: &DVector<f64>) -> DVector<f64> {
        self.projector() * (w - &self.u)
    }

    /// Laws of `along(X)` for `X ~ g`: one-dimensional Gaussians.
    pub fn along_law(&self, g: &Gaussian) -> Result<Gaussian> {
        let vv = self.v.dot(&self.v);
        let row = DMatrix::from_row_slice(1, self.v.len(), (&self.v / vv).as_slice());
        let shift = DVector::from_element(1, -self.u.dot(&self.v) / vv);
        affine_image(g, &row, &shift)
    }

    /// Law of `pi^T (X - u)` for `X ~ g`, a `(d-1)`-dimensional Gaussian.
    pub fn across_law(&self, g: &Gaussian) -> Result<Gaussian> {
        let pt = self.pi.transpose();
        let shift = -(&pt * &self.u);
        affine_image(g, &pt, &shift)
    }
}

/// Different-mean bound (`d >= 2`, `mu1 != mu2`, both covariances positive definite).
pub fn bound_diff_mean(g1: &Gaussian, g2: &Gaussian, tol: &Tolerances) -> Result<BoundInterval> {
    check_dims(g1.dim(), g2.dim())?;
    if g1.dim() < 2 {
        return Err(Error::OneDimensional);
    }
    if g1.mean() == g2.mean() {
        return Err(Error::SameMean);
    }
    for g in [g1, g2] {
        inverse_sqrt_pd(g.cov(), tol.rank_tol)?;
    }
    let decomposition = MeanGapDecomposition::new(g1, g2, tol)?;
    Ok(diff_mean_interval(decomposition.tv_term()))
}

fn univariate_params(g: &Gaussian) -> Result<(f64, f64)> {
    if g.dim() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: g.dim(),
        });
    }
    let var = g.cov()[(0, 0)];
    if !(var > 0.0) {
        return Err(Error::ZeroVariance);
    }
    Ok((g.mean()[0], var))
}

/// One-dimensional bound with `sigma1` in the denominators:
///
/// `lower = (1/200) min{1, max{|s1^2 - s2^2| / s1^2, 40 |m1 - m2| / s1}}`,
/// `upper = min{1, 3 |s1^2 - s2^2| / (2 s1^2) + |m1 - m2| / (2 s1)}`.
pub fn bound_1d(g1: &Gaussian, g2: &Gaussian) -> Result<BoundInterval> {
    let (m1, v1) = univariate_params(g1)?;
    let (m2, v2) = univariate_params(g2)?;
    let sd1 = v1.sqrt();
    let var_term = (v1 - v2).abs() / v1;
    let mean_term = (m1 - m2).abs() / sd1;
    let lower = ONE_DIM_LOWER * var_term.max(ONE_DIM_MEAN_WEIGHT * mean_term).min(1.0);
    let upper = 1.5 * var_term + 0.5 * mean_term;
    Ok(BoundInterval::new(Method::OneDimThm3, lower, upper))
}

/// Symmetric one-dimensional bound: the smaller standard deviation in the
/// lower bound and the larger in the upper bound. Equal to
/// `both_orders(g1, g2, bound_1d)`.
pub fn bound_1d_symmetric(g1: &Gaussian, g2: &Gaussian) -> Result<BoundInterval> {
    both_orders(g1, g2, bound_1d)
}

/// Pinsker bound `TV <= sqrt(KL/2)` using the closed-form KL divergence of
/// `N(mu2, S2)` from `N(mu1, S1)`:
/// `KL = (tr(S1^{-1} S2 - I) + (mu1-mu2)^T S1^{-1} (mu1-mu2) - log det(S2 S1^{-1})) / 2`.
///
/// The trace and log-determinant come from the relative spectrum as
/// `sum (lambda_i - log(1 + lambda_i))`.
pub fn bound_pinsker_kl(g1: &Gaussian, g2: &Gaussian, tol: &Tolerances) -> Result<BoundInterval> {
    check_dims(g1.dim(), g2.dim())?;
    inverse_sqrt_pd(g2.cov(), tol.rank_tol)?;
    let rel = relative_eigen(g1.cov(), g2.cov(), tol.rank_tol)?;
    let delta = &rel.whitener * (g1.mean() - g2.mean());
    let spectral: f64 = rel.gap.lambdas.iter().map(|&l| l - l.ln_1p()).sum();
    let twice_kl = (spectral + delta.dot(&delta)).max(0.0);
    Ok(BoundInterval::new(
        Method::PinskerKL,
        0.0,
        0.5 * twice_kl.sqrt(),
    ))
}

/// Squared Hellinger distance, evaluated in log space from the relative
/// spectrum of the pair.
pub fn hellinger_squared(g1: &Gaussian, g2: &Gaussian, tol: &Tolerances) -> Result<f64> {
    check_dims(g1.dim(), g2.dim())?;
    inverse_sqrt_pd(g2.cov(), tol.rank_tol)?;
    let rel = relative_eigen(g1.cov(), g2.cov(), tol.rank_tol)?;
    let delta = rel.joint_map() * (g1.mean() - g2.mean());
    let mut log_affinity = 0.0;
    for (l, d) in rel.gap.lambdas.iter().zip(delta.iter()) {
        let half = 1.0 + 0.5 * l;
        log_affinity += 0.25 * l.ln_1p() - 0.5 * half.ln() - d * d / (8.0 * half);
    }
    Ok((-log_affinity.min(0.0).exp_m1()).clamp(0.0, 1.0))
}

/// `[h^2, h sqrt(2 - h^2)]`.
pub fn bound_hellinger(g1: &Gaussian, g2: &Gaussian, tol: &Tolerances) -> Result<BoundInterval> {
    let h2 = hellinger_squared(g1, g2, tol)?;
    Ok(BoundInterval::new(
        Method::Hellinger,
        h2,
        (h2 * (2.0 - h2)).sqrt(),
    ))
}

/// Exact TV for a shared covariance: `2 Phi(m/2) - 1` with `m` the
/// Mahalanobis distance between the means.
pub fn exact_equal_cov(
    mu1: &DVector<f64>,
    mu2: &DVector<f64>,
    sigma: &DMatrix<f64>,
    tol: &Tolerances,
) -> Result<BoundInterval> {
    check_dims(mu1.len(), mu2.len())?;
    check_dims(mu1.len(), sigma.nrows())?;
    let w = inverse_sqrt_pd(sigma, tol.rank_tol)?;
    let m = (w * (mu1 - mu2)).norm();
    Ok(BoundInterval::exact(
        Method::EqualCovExact,
        normal::centered_mass(m),
    ))
}

pub fn covariances_equal(s1: &DMatrix<f64>, s2: &DMatrix<f64>) -> bool {
    s1.shape() == s2.shape() && (s1 - s2).norm() <= EQUAL_COV_TOL * s1.norm().max(s2.norm())
}

/// Diagnostic notes attached to a report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportFlag {
    /// Affine supports differ, so the distance is exactly 1.
    SupportMismatch,
    /// At least one covariance is identically zero.
    ZeroCovariance,
    IdenticalParameters,
    /// Both Gaussians were restricted to their common range of this rank.
    ProjectedToRange {
        rank: usize,
    },
    /// `v^T Sigma1 v` numerically zero; the different-mean bound was skipped.
    NearSingularSigma1,
    /// `Sigma2` is numerically singular relative to `Sigma1`.
    SpectrumClipped,
}

/// All applicable intervals for one pair, merged.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub intervals: Vec<BoundInterval>,
    pub best_lower: f64,
    pub best_upper: f64,
    pub flags: Vec<ReportFlag>,
}

impl BoundReport {
    /// Merges intervals into `[max lower, min upper]`. Fails when the merged
    /// lower bound exceeds the upper bound by more than [`CONSISTENCY_SLACK`].
    pub fn from_intervals(intervals: Vec<BoundInterval>, flags: Vec<ReportFlag>) -> Result<Self> {
        let best_lower = intervals.iter().map(|i| i.lower).fold(0.0, f64::max);
        let best_upper = intervals.iter().map(|i| i.upper).fold(1.0, f64::min);
        if best_lower > best_upper + CONSISTENCY_SLACK {
            return Err(Error::InconsistentBounds {
                lower: best_lower,
                upper: best_upper,
            });
        }
        Ok(Self {
            best_lower: best_lower.min(best_upper),
            best_upper,
            intervals,
            flags,
        })
    }

    pub fn interval(&self, method: Method) -> Option<&BoundInterval> {
        self.intervals.iter().find(|i| i.method == method)
    }

    pub fn has_flag(&self, flag: &ReportFlag) -> bool {
        self.flags.contains(flag)
    }
}

/// Report over every method.
pub fn assess(g1: &Gaussian, g2: &Gaussian, tol: &Tolerances) -> Result<BoundReport> {
    assess_with(g1, g2, tol, MethodSet::all())
}

/// How two supports relate, with the common range when one exists.
pub(crate) enum SupportRelation {
    Disjoint {
        zero_cov: bool,
    },
    /// Both covariances vanish and the means coincide.
    SamePoint,
    Common(crate::gaussian::RangeBasis),
}

pub(crate) fn relate_supports(
    g1: &Gaussian,
    g2: &Gaussian,
    tol: &Tolerances,
) -> Result<SupportRelation> {
    check_dims(g1.dim(), g2.dim())?;
    let s1 = affine_support(g1, tol.rank_tol);
    let s2 = affine_support(g2, tol.rank_tol);
    match (s1, s2) {
        (Ok(a), Ok(b)) => {
            if a.coincides_with(&b, tol.range_tol) {
                Ok(SupportRelation::Common(a.basis))
            } else {
                Ok(SupportRelation::Disjoint { zero_cov: false })
            }
        }
        (Err(Error::ZeroCovariance), Err(Error::ZeroCovariance)) => {
            let diff = (g1.mean() - g2.mean()).norm();
            if diff <= tol.range_tol * (1.0 + diff) {
                Ok(SupportRelation::SamePoint)
            } else {
                Ok(SupportRelation::Disjoint { zero_cov: true })
            }
        }
        (Err(Error::ZeroCovariance), Ok(_)) | (Ok(_), Err(Error::ZeroCovariance)) => {
            Ok(SupportRelation::Disjoint { zero_cov: true })
        }
        (Err(e), _) | (_, Err(e)) => Err(e),
    }
}

/// Restricts both Gaussians to coordinates in the given basis.
pub(crate) fn project_pair(
    g1: &Gaussian,
    g2: &Gaussian,
    basis: &DMatrix<f64>,
) -> Result<(Gaussian, Gaussian)> {
    let pt = basis.transpose();
    let zero = DVector::zeros(pt.nrows());
    Ok((affine_image(g1, &pt, &zero)?, affine_image(g2, &pt, &zero)?))
}

/// Report over the requested methods.
///
/// Dispatch: differing affine supports give exactly 1; identical parameters
/// give exactly 0; a common rank-deficient support is reduced to its range
/// coordinates first; full-rank pairs collect every applicable method, each
/// evaluated in both argument orders.
pub fn assess_with(
    g1: &Gaussian,
    g2: &Gaussian,
    tol: &Tolerances,
    methods: MethodSet,
) -> Result<BoundReport> {
    let mut flags = Vec::new();
    let range = match relate_supports(g1, g2, tol)? {
        SupportRelation::Disjoint { zero_cov } => {
            if zero_cov {
                flags.push(ReportFlag::ZeroCovariance);
            }
            flags.push(ReportFlag::SupportMismatch);
            return BoundReport::from_intervals(
                vec![BoundInterval::exact(Method::DisjointSupport, 1.0)],
                flags,
            );
        }
        SupportRelation::SamePoint => {
            flags.extend([ReportFlag::ZeroCovariance, ReportFlag::IdenticalParameters]);
            return BoundReport::from_intervals(
                vec![BoundInterval::exact(Method::EqualCovExact, 0.0)],
                flags,
            );
        }
        SupportRelation::Common(range) => range,
    };

    if g1.mean() == g2.mean() && covariances_equal(g1.cov(), g2.cov()) {
        flags.push(ReportFlag::IdenticalParameters);
        return BoundReport::from_intervals(
            vec![BoundInterval::exact(Method::EqualCovExact, 0.0)],
            flags,
        );
    }

    if !range.is_full_rank() {
        let (h1, h2) = project_pair(g1, g2, range.basis())?;
        let mut reduced = assess_with(&h1, &h2, tol, methods)?;
        reduced
            .flags
            .insert(0, ReportFlag::ProjectedToRange { rank: range.rank() });
        return Ok(reduced);
    }

    full_rank_report(g1, g2, tol, methods, flags)
}

fn full_rank_report(
    g1: &Gaussian,
    g2: &Gaussian,
    tol: &Tolerances,
    methods: MethodSet,
    mut flags: Vec<ReportFlag>,
) -> Result<BoundReport> {
    let d = g1.dim();
    let same_mean = g1.mean() == g2.mean();
    let mut intervals = Vec::new();

    if relative_spectrum(g1.cov(), g2.cov(), tol.rank_tol)?.clipped
        || relative_spectrum(g2.cov(), g1.cov(), tol.rank_tol)?.clipped
    {
        flags.push(ReportFlag::SpectrumClipped);
    }

    if methods.contains(Method::SameMeanThm1) && same_mean {
        intervals.push(both_orders(g1.cov(), g2.cov(), |a, b| {
            bound_same_mean(a, b, tol)
        })?);
    }
    if methods.contains(Method::DiffMeanThm2) && d >= 2 && !same_mean {
        match both_orders(g1, g2, |a, b| bound_diff_mean(a, b, tol)) {
            Ok(i) => intervals.push(i),
            Err(Error::NearSingular) => flags.push(ReportFlag::NearSingularSigma1),
            Err(e) => return Err(e),
        }
    }
    if methods.contains(Method::OneDimThm3) && d == 1 {
        intervals.push(bound_1d_symmetric(g1, g2)?);
    }
    if methods.contains(Method::PinskerKL) {
        intervals.push(both_orders(g1, g2, |a, b| bound_pinsker_kl(a, b, tol))?);
    }
    if methods.contains(Method::Hellinger) {
        intervals.push(bound_hellinger(g1, g2, tol)?);
    }
    if methods.contains(Method::EqualCovExact) && covariances_equal(g1.cov(), g2.cov()) {
        intervals.push(exact_equal_cov(g1.mean(), g2.mean(), g1.cov(), tol)?);
    }
    BoundReport::from_intervals(intervals, flags)
}
