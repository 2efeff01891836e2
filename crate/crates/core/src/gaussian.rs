//! Gaussian domain types and the dense linear algebra every bound builds on:
//! rank and range detection, symmetric square roots, relative spectra and
//! orthogonal complements.
//!
//! All matrices are dense `nalgebra` matrices. Symmetric problems are always
//! solved with a symmetric eigendecomposition so that near-singularity shows
//! up in the same factorization that the rest of the computation uses.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};

/// Eigenvalues at or below `rank_tol * lambda_max` are treated as zero.
pub const DEFAULT_RANK_TOL: f64 = 1e-9;

/// Projector Frobenius distance under which two ranges are considered equal.
pub const DEFAULT_RANGE_TOL: f64 = 1e-8;

/// Relative asymmetry allowed in a covariance before construction rejects it.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// A (possibly singular) Gaussian distribution `N(mean, cov)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Gaussian {
    mean: DVector<f64>,
    cov: DMatrix<f64>,
}

impl Gaussian {
    /// Validates and builds a Gaussian using [`DEFAULT_RANK_TOL`] for the PSD check.
    pub fn new(mean: DVector<f64>, cov: DMatrix<f64>) -> Result<Self> {
        Self::with_rank_tol(mean, cov, DEFAULT_RANK_TOL)
    }

    /// Validates and builds a Gaussian.
    ///
    /// The covariance must be square with the mean's dimension, finite,
    /// symmetric to within [`SYMMETRY_TOL`] relative to its largest entry, and
    /// have every eigenvalue at least `-rank_tol * lambda_max`. The stored
    /// covariance is the exact symmetric part of the input.
    pub fn with_rank_tol(mean: DVector<f64>, cov: DMatrix<f64>, rank_tol: f64) -> Result<Self> {
        let d = mean.len();
        if d == 0 {
            return Err(Error::EmptyDimension);
        }
        if cov.nrows() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: cov.nrows(),
            });
        }
        if cov.ncols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: cov.ncols(),
            });
        }
        if let Some(i) = mean.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite {
                location: format!("mean[{i}]"),
            });
        }
        let mut scale = 0.0f64;
        for i in 0..d {
            for j in 0..d {
                let x = cov[(i, j)];
                if !x.is_finite() {
                    return Err(Error::NonFinite {
                        location: format!("cov[{i}][{j}]"),
                    });
                }
                scale = scale.max(x.abs());
            }
        }
        for i in 0..d {
            for j in (i + 1)..d {
                let (a, b) = (cov[(i, j)], cov[(j, i)]);
                if (a - b).abs() > SYMMETRY_TOL * scale {
                    return Err(Error::NotSymmetric {
                        row: i,
                        col: j,
                        value: a,
                        mirror: b,
                    });
                }
            }
        }
        let cov = symmetrize(&cov);
        let eig = SymmetricEigen::new(cov.clone());
        let max = eig.eigenvalues.max().max(0.0);
        let min = eig.eigenvalues.min();
        if min < -rank_tol * max {
            return Err(Error::NotPositiveSemidefinite {
                eigenvalue: min,
                threshold: rank_tol * max,
            });
        }
        Ok(Self { mean, cov })
    }

    /// Builds a Gaussian from row-major slices.
    pub fn from_rows(mean: &[f64], cov: &[Vec<f64>]) -> Result<Self> {
        let d = mean.len();
        if cov.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: cov.len(),
            });
        }
        for (i, row) in cov.iter().enumerate() {
            if row.len() != d {
                return Err(Error::RaggedCovariance {
                    row: i,
                    expected: d,
                    found: row.len(),
                });
            }
        }
        let cov = DMatrix::from_fn(d, d, |i, j| cov[i][j]);
        Self::new(DVector::from_column_slice(mean), cov)
    }

    /// One-dimensional `N(mean, variance)`.
    pub fn univariate(mean: f64, variance: f64) -> Result<Self> {
        Self::new(
            DVector::from_element(1, mean),
            DMatrix::from_element(1, 1, variance),
        )
    }

    /// `N(mean, I_d)`.
    pub fn standard(mean: DVector<f64>) -> Result<Self> {
        let d = mean.len();
        Self::new(mean, DMatrix::identity(d, d))
    }

    /// Constructs without validation. Callers guarantee the covariance is
    /// symmetric PSD by construction (e.g. `A Sigma A^T`).
    pub(crate) fn from_parts_unchecked(mean: DVector<f64>, cov: DMatrix<f64>) -> Self {
        Self { mean, cov }
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn cov(&self) -> &DMatrix<f64> {
        &self.cov
    }

    /// Whether the smallest eigenvalue clears `rank_tol * lambda_max`.
    pub fn is_positive_definite(&self, rank_tol: f64) -> bool {
        let eig = SymmetricEigen::new(self.cov.clone());
        let max = eig.eigenvalues.max();
        max > 0.0 && eig.eigenvalues.min() > rank_tol * max
    }
}

/// Column-orthonormal basis of the detected range of a covariance.
#[derive(Debug, Clone, PartialEq)]
pub struct RangeBasis {
    basis: DMatrix<f64>,
    dropped_mass: f64,
}

impl RangeBasis {
    /// `d x r` matrix with orthonormal columns.
    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.ncols()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    /// Largest discarded eigenvalue divided by the largest eigenvalue.
    pub fn dropped_mass(&self) -> f64 {
        self.dropped_mass
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank() == self.ambient_dim()
    }

    /// Orthogonal projector `basis * basis^T` onto the range.
    pub fn projector(&self) -> DMatrix<f64> {
        &self.basis * self.basis.transpose()
    }
}

/// Eigenvalues of the symmetric matrix `Sigma1^{-1/2} Sigma2 Sigma1^{-1/2} - I`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralGap {
    pub lambdas: Vec<f64>,
    pub rho: f64,
    /// Set when some eigenvalue sat at `-1 + tol` or below, i.e. `Sigma2`
    /// is numerically singular relative to `Sigma1`.
    pub clipped: bool,
}

impl SpectralGap {
    fn from_lambdas(mut lambdas: Vec<f64>, tol: f64) -> Self {
        let mut clipped = false;
        for l in lambdas.iter_mut() {
            if *l <= -1.0 + tol {
                clipped = true;
            }
            *l = l.max(-1.0);
        }
        let rho = lambdas.iter().map(|l| l * l).sum::<f64>().sqrt();
        Self {
            lambdas,
            rho,
            clipped,
        }
    }

    /// `min{1, rho}`, the quantity the same-mean bounds scale with.
    pub fn capped_rho(&self) -> f64 {
        self.rho.min(1.0)
    }
}

/// Whitened description of `Sigma2` relative to `Sigma1`: with
/// `W = Sigma1^{-1/2}` and `W Sigma2 W = U diag(1 + lambda) U^T`.
#[derive(Debug, Clone)]
pub(crate) struct RelativeEigen {
    pub whitener: DMatrix<f64>,
    pub rotation: DMatrix<f64>,
    pub gap: SpectralGap,
}

impl RelativeEigen {
    /// `U^T W`, mapping raw coordinates into the joint eigenbasis.
    pub fn joint_map(&self) -> DMatrix<f64> {
        self.rotation.transpose() * &self.whitener
    }
}

pub(crate) fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidTolerance { value: tol })
    }
}

/// Flips each column so that its largest-magnitude entry is positive.
fn canonical_signs(m: &mut DMatrix<f64>) {
    for mut col in m.column_iter_mut() {
        let mut pivot = 0.0f64;
        for &x in col.iter() {
            if x.abs() > pivot.abs() {
                pivot = x;
            }
        }
        if pivot < 0.0 {
            col.neg_mut();
        }
    }
}

/// Eigenvectors of `cov` whose eigenvalues exceed `rank_tol * lambda_max`.
pub fn detect_range(cov: &DMatrix<f64>, rank_tol: f64) -> Result<RangeBasis> {
    check_tol(rank_tol)?;
    let eig = SymmetricEigen::new(symmetrize(cov));
    let max = eig.eigenvalues.max();
    if max <= 0.0 {
        return Err(Error::ZeroCovariance);
    }
    let threshold = rank_tol * max;
    let mut kept: Vec<(f64, usize)> = Vec::new();
    let mut dropped = 0.0f64;
    for (i, &l) in eig.eigenvalues.iter().enumerate() {
        if l > threshold {
            kept.push((l, i));
        } else {
            dropped = dropped.max(l.max(0.0));
        }
    }
    // Descending eigenvalue order keeps the basis deterministic.
    kept.sort_by(|a, b| b.0.total_cmp(&a.0));
    let d = cov.nrows();
    let mut basis = DMatrix::zeros(d, kept.len());
    for (k, &(_, i)) in kept.iter().enumerate() {
        basis.set_column(k, &eig.eigenvectors.column(i));
    }
    canonical_signs(&mut basis);
    Ok(RangeBasis {
        basis,
        dropped_mass: dropped / max,
    })
}

/// Whether two detected ranges coincide: same rank and projector Frobenius
/// distance at most `tol`.
pub fn same_range(a: &RangeBasis, b: &RangeBasis, tol: f64) -> bool {
    a.ambient_dim() == b.ambient_dim()
        && a.rank() == b.rank()
        && (a.projector() - b.projector()).norm() <= tol
}

/// The affine subspace `point + range(basis)` carrying a Gaussian's mass.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineSupport {
    pub point: DVector<f64>,
    pub basis: RangeBasis,
}

impl AffineSupport {
    /// Equal ranges and a point offset lying in the common range.
    pub fn coincides_with(&self, other: &AffineSupport, range_tol: f64) -> bool {
        if !same_range(&self.basis, &other.basis, range_tol) {
            return false;
        }
        let diff = &self.point - &other.point;
        let residual = &diff - self.basis.projector() * &diff;
        residual.norm() <= range_tol * (1.0 + diff.norm())
    }
}

pub fn affine_support(g: &Gaussian, rank_tol: f64) -> Result<AffineSupport> {
    Ok(AffineSupport {
        point: g.mean.clone(),
        basis: detect_range(&g.cov, rank_tol)?,
    })
}

/// Symmetric eigendecomposition with a positive-definiteness check.
fn pd_eigen(m: &DMatrix<f64>, rank_tol: f64) -> Result<SymmetricEigen<f64, nalgebra::Dyn>> {
    let eig = SymmetricEigen::new(symmetrize(m));
    let max = eig.eigenvalues.max();
    let min = eig.eigenvalues.min();
    let threshold = rank_tol * max.max(0.0);
    if !(max > 0.0) || min <= threshold {
        return Err(Error::NotPositiveDefinite {
            min_eigenvalue: min,
            threshold,
        });
    }
    Ok(eig)
}

fn spectral_function(
    eig: &SymmetricEigen<f64, nalgebra::Dyn>,
    f: impl Fn(f64) -> f64,
) -> DMatrix<f64> {
    let v = &eig.eigenvectors;
    let scaled = DMatrix::from_fn(v.nrows(), v.ncols(), |i, j| {
        v[(i, j)] * f(eig.eigenvalues[j])
    });
    symmetrize(&(scaled * v.transpose()))
}

pub(crate) fn relative_eigen(
    sigma1: &DMatrix<f64>,
    sigma2: &DMatrix<f64>,
    rank_tol: f64,
) -> Result<RelativeEigen> {
    if sigma1.shape() != sigma2.shape() {
        return Err(Error::DimensionMismatch {
            expected: sigma1.nrows(),
            found: sigma2.nrows(),
        });
    }
    let eig1 = pd_eigen(sigma1, rank_tol)?;
    let whitener = spectral_function(&eig1, |l| 1.0 / l.sqrt());
    let whitened = symmetrize(&(&whitener * sigma2 * &whitener));
    let eig = SymmetricEigen::new(whitened);
    let lambdas: Vec<f64> = eig.eigenvalues.iter().map(|e| e - 1.0).collect();
    Ok(RelativeEigen {
        whitener,
        rotation: eig.eigenvectors,
        gap: SpectralGap::from_lambdas(lambdas, rank_tol),
    })
}

/// Eigenvalues of `Sigma1^{-1} Sigma2 - I`, computed through symmetric
/// whitening by `Sigma1^{-1/2}`.
pub fn relative_spectrum(
    sigma1: &DMatrix<f64>,
    sigma2: &DMatrix<f64>,
    rank_tol: f64,
) -> Result<SpectralGap> {
    relative_eigen(sigma1, sigma2, rank_tol).map(|r| r.gap)
}

/// `Sigma^{-1/2}` for a positive definite `Sigma`.
pub(crate) fn inverse_sqrt_pd(m: &DMatrix<f64>, rank_tol: f64) -> Result<DMatrix<f64>> {
    let eig = pd_eigen(m, rank_tol)?;
    Ok(spectral_function(&eig, |l| 1.0 / l.sqrt()))
}

/// Symmetric PSD square root. Round-off negative eigenvalues map to zero.
pub fn whiten_sqrt(cov: &DMatrix<f64>) -> DMatrix<f64> {
    let eig = SymmetricEigen::new(symmetrize(cov));
    spectral_function(&eig, |l| l.max(0.0).sqrt())
}

/// Pseudo-inverse square root: `sum v v^T / sqrt(lambda)` over the detected range.
pub fn inverse_sqrt_on_range(cov: &DMatrix<f64>, rank_tol: f64) -> Result<DMatrix<f64>> {
    check_tol(rank_tol)?;
    let eig = SymmetricEigen::new(symmetrize(cov));
    let max = eig.eigenvalues.max();
    if max <= 0.0 {
        return Err(Error::ZeroCovariance);
    }
    let threshold = rank_tol * max;
    Ok(spectral_function(&eig, |l| {
        if l > threshold {
            1.0 / l.sqrt()
        } else {
            0.0
        }
    }))
}

/// `d x (d-1)` orthonormal basis of the hyperplane orthogonal to `v`, taken
/// from columns `2..d` of the Householder reflector sending `v/|v|` to `e1`.
pub fn complement_basis(v: &DVector<f64>) -> Result<DMatrix<f64>> {
    let d = v.len();
    if d < 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: d,
        });
    }
    let norm = v.norm();
    if !(norm > 0.0) {
        return Err(Error::ZeroVector);
    }
    let mut w = v / norm;
    let sign = if w[0] >= 0.0 { 1.0 } else { -1.0 };
    w[0] += sign;
    let ww = w.dot(&w);
    let reflector = DMatrix::identity(d, d) - (&w * w.transpose()) * (2.0 / ww);
    Ok(reflector.columns(1, d - 1).into_owned())
}

/// Law of `A X + b` for `X ~ g`: `N(A mu + b, A Sigma A^T)`.
pub fn affine_image(g: &Gaussian, a: &DMatrix<f64>, b: &DVector<f64>) -> Result<Gaussian> {
    if a.ncols() != g.dim() {
        return Err(Error::DimensionMismatch {
            expected: g.dim(),
            found: a.ncols(),
        });
    }
    if b.len() != a.nrows() {
        return Err(Error::DimensionMismatch {
            expected: a.nrows(),
            found: b.len(),
        });
    }
    if a.nrows() == 0 {
        return Err(Error::EmptyDimension);
    }
    let mean = a * &g.mean + b;
    let cov = symmetrize(&(a * &g.cov * a.transpose()));
    Ok(Gaussian::from_parts_unchecked(mean, cov))
}
