//! Seeded random Gaussian pairs for property tests and benchmark runs.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian::{symmetrize, Gaussian};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EnsembleKind {
    /// Shared mean, both covariances positive definite.
    SameMeanPD,
    /// Rank-deficient covariances sharing a range; means differ within it or not at all.
    SameRangeSingular,
    /// Distinct means, both covariances positive definite.
    DiffMean,
    /// Tiny perturbations of a common Gaussian.
    NearIdentical,
    /// Affine supports that do not coincide.
    DisjointSupport,
    OneDim,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub dim: usize,
    pub kind: EnsembleKind,
    #[serde(default = "default_cap")]
    pub condition_cap: f64,
    pub count: usize,
    #[serde(default)]
    pub seed: u64,
}

fn default_cap() -> f64 {
    1e3
}

impl EnsembleSpec {
    pub fn new(kind: EnsembleKind, dim: usize, count: usize, seed: u64) -> Self {
        Self {
            dim,
            kind,
            condition_cap: default_cap(),
            count,
            seed,
        }
    }

    pub fn with_cap(mut self, cap: f64) -> Self {
        self.condition_cap = cap;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidSpec(msg.to_string()));
        if self.dim == 0 {
            return bad("dim must be at least 1");
        }
        if self.count == 0 {
            return bad("count must be at least 1");
        }
        if !(self.condition_cap >= 1.0 && self.condition_cap.is_finite()) {
            return bad("condition_cap must be a finite number >= 1");
        }
        match self.kind {
            EnsembleKind::SameRangeSingular | EnsembleKind::DisjointSupport if self.dim < 2 => {
                bad("kind requires dim >= 2")
            }
            EnsembleKind::OneDim if self.dim != 1 => bad("OneDim requires dim = 1"),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaussianPair {
    pub first: Gaussian,
    pub second: Gaussian,
}

/// Generates `spec.count` pairs; identical specs give identical pairs.
pub fn generate(spec: &EnsembleSpec) -> Result<Vec<GaussianPair>> {
    spec.validate()?;
    let mut gen = Generator {
        rng: ChaCha8Rng::seed_from_u64(spec.seed),
        log_cap: spec.condition_cap.ln(),
    };
    (0..spec.count)
        .map(|_| gen.pair(spec.kind, spec.dim))
        .collect()
}

struct Generator {
    rng: ChaCha8Rng,
    log_cap: f64,
}

impl Generator {
    fn normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    fn log_uniform(&mut self, lo: f64, hi: f64) -> f64 {
        let (a, b) = (lo.ln(), hi.ln());
        (a + (b - a) * self.rng.random::<f64>()).exp()
    }

    fn gaussian_matrix(&mut self, rows: usize, cols: usize) -> DMatrix<f64> {
        DMatrix::from_fn(rows, cols, |_, _| self.rng.sample(StandardNormal))
    }

    fn gaussian_vector(&mut self, d: usize) -> DVector<f64> {
        DVector::from_fn(d, |_, _| self.rng.sample(StandardNormal))
    }

    /// Orthonormalizes `m` and fixes column signs by `diag(R)`, which makes
    /// the result Haar-distributed when `m` has i.i.d. normal entries.
    fn orthonormalize(m: DMatrix<f64>) -> DMatrix<f64> {
        let qr = m.qr();
        let r = qr.r();
        let mut q = qr.q();
        for (j, mut col) in q.column_iter_mut().enumerate() {
            if r[(j, j)] < 0.0 {
                col.neg_mut();
            }
        }
        q
    }

    fn haar(&mut self, d: usize) -> DMatrix<f64> {
        let m = self.gaussian_matrix(d, d);
        Self::orthonormalize(m)
    }

    /// Eigenvalues log-uniform in `[cap^{-1/2}, cap^{1/2}]`.
    fn spectrum(&mut self, d: usize) -> Vec<f64> {
        let half = 0.5 * self.log_cap;
        (0..d)
            .map(|_| (half * (2.0 * self.rng.random::<f64>() - 1.0)).exp())
            .collect()
    }

    fn clamp_to_cap(&self, x: f64) -> f64 {
        let half = 0.5 * self.log_cap;
        x.clamp((-half).exp(), half.exp())
    }

    fn compose(q: &DMatrix<f64>, eigs: &[f64]) -> DMatrix<f64> {
        let scaled = DMatrix::from_fn(q.nrows(), q.ncols(), |i, j| q[(i, j)] * eigs[j]);
        symmetrize(&(scaled * q.transpose()))
    }

    /// Two positive definite matrices. Half the time they are independent,
    /// otherwise the second perturbs the first's eigenbasis and spectrum at a
    /// log-uniform scale in `[lo, hi]`.
    fn pd_pair(&mut self, d: usize, lo: f64, hi: f64) -> (DMatrix<f64>, DMatrix<f64>) {
        let q1 = self.haar(d);
        let e1 = self.spectrum(d);
        let s1 = Self::compose(&q1, &e1);
        if self.rng.random_bool(0.5) && lo >= 1e-3 {
            let q2 = self.haar(d);
            let e2 = self.spectrum(d);
            return (s1, Self::compose(&q2, &e2));
        }
        let t = self.log_uniform(lo, hi);
        let rotation =
            Self::orthonormalize(DMatrix::identity(d, d) + self.gaussian_matrix(d, d) * t);
        let q2 = q1 * rotation;
        let e2: Vec<f64> = e1
            .iter()
            .map(|&e| {
                let g = self.normal();
                self.clamp_to_cap(e * (t * g).exp())
            })
            .collect();
        (s1, Self::compose(&q2, &e2))
    }

    fn direction(&mut self, d: usize) -> DVector<f64> {
        loop {
            let v = self.gaussian_vector(d);
            let n = v.norm();
            if n > 1e-8 {
                return v / n;
            }
        }
    }

    fn build(
        mean1: DVector<f64>,
        cov1: DMatrix<f64>,
        mean2: DVector<f64>,
        cov2: DMatrix<f64>,
    ) -> Result<GaussianPair> {
        Ok(GaussianPair {
            first: Gaussian::new(mean1, cov1)?,
            second: Gaussian::new(mean2, cov2)?,
        })
    }

    fn pair(&mut self, kind: EnsembleKind, d: usize) -> Result<GaussianPair> {
        match kind {
            EnsembleKind::SameMeanPD => {
                let mean = self.gaussian_vector(d);
                let (s1, s2) = self.pd_pair(d, 1e-3, 2.0);
                Self::build(mean.clone(), s1, mean, s2)
            }
            EnsembleKind::DiffMean => {
                let mean = self.gaussian_vector(d);
                let (s1, s2) = if self.rng.random_bool(0.2) {
                    let q = self.haar(d);
                    let e = self.spectrum(d);
                    let s = Self::compose(&q, &e);
                    (s.clone(), s)
                } else {
                    self.pd_pair(d, 1e-3, 2.0)
                };
                let shift = self.direction(d) * self.log_uniform(1e-3, 3.0);
                Self::build(mean.clone(), s1, mean + shift, s2)
            }
            EnsembleKind::OneDim => {
                let m1 = self.normal();
                let v1 = self.spectrum(1)[0];
                let (m2, v2) = match self.rng.random_range(0..3) {
                    0 => (self.normal(), self.spectrum(1)[0]),
                    _ => {
                        let t = self.log_uniform(1e-4, 2.0);
                        let g = self.normal();
                        let shift = if self.rng.random_bool(0.25) {
                            0.0
                        } else {
                            t * self.normal() * v1.sqrt()
                        };
                        (m1 + shift, v1 * (t * g).exp())
                    }
                };
                Self::build(
                    DVector::from_element(1, m1),
                    DMatrix::from_element(1, 1, v1),
                    DVector::from_element(1, m2),
                    DMatrix::from_element(1, 1, v2),
                )
            }
            EnsembleKind::NearIdentical => {
                let mean = self.gaussian_vector(d);
                let (s1, s2) = self.pd_pair(d, 1e-6, 1e-2);
                let shift = if self.rng.random_bool(0.5) {
                    DVector::zeros(d)
                } else {
                    self.direction(d) * self.log_uniform(1e-6, 1e-2)
                };
                Self::build(mean.clone(), s1, mean + shift, s2)
            }
            EnsembleKind::SameRangeSingular => {
                let r = self.rng.random_range(1..d);
                let q = self.haar(d);
                let basis = q.columns(0, r).into_owned();
                let (a1, a2) = self.pd_pair(r, 1e-3, 2.0);
                let mean = self.gaussian_vector(d);
                let shift = if self.rng.random_bool(0.5) {
                    DVector::zeros(d)
                } else {
                    &basis * self.direction(r) * self.log_uniform(1e-2, 3.0)
                };
                let s1 = symmetrize(&(&basis * a1 * basis.transpose()));
                let s2 = symmetrize(&(&basis * a2 * basis.transpose()));
                Self::build(mean.clone(), s1, mean + shift, s2)
            }
            EnsembleKind::DisjointSupport => {
                let r = self.rng.random_range(1..d);
                let q = self.haar(d);
                let basis = q.columns(0, r).into_owned();
                let mean = self.gaussian_vector(d);
                let (a1, a2) = self.pd_pair(r, 1e-3, 2.0);
                let s1 = symmetrize(&(&basis * a1 * basis.transpose()));
                if self.rng.random_bool(0.5) {
                    // same range, mean offset leaves it
                    let complement = q.columns(r, d - r).into_owned();
                    let off = &complement * self.direction(d - r) * self.log_uniform(1e-2, 3.0);
                    let s2 = symmetrize(&(&basis * a2 * basis.transpose()));
                    Self::build(mean.clone(), s1, mean + off, s2)
                } else {
                    // different rank
                    let r2 = if r >= 2 && self.rng.random_bool(0.5) {
                        r - 1
                    } else {
                        r + 1
                    };
                    let basis2 = q.columns(0, r2).into_owned();
                    let a = {
                        let q = self.haar(r2);
                        let e = self.spectrum(r2);
                        Self::compose(&q, &e)
                    };
                    let s2 = symmetrize(&(&basis2 * a * basis2.transpose()));
                    Self::build(mean.clone(), s1, mean, s2)
                }
            }
        }
    }
}
