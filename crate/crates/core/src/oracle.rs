//! Reference values of the TV distance used to check the bounds.
//!
//! One-dimensional pairs and equal-covariance pairs have exact closed forms.
//! Everything else goes through a seeded Monte Carlo estimate of
//! `E_{X~P}[(1 - q(X)/p(X))_+]`, which equals half the `L1` distance and is
//! bounded in `[0, 1]` per draw.
//!
//! The Monte Carlo sample space is split into blocks of [`BLOCK_SIZE`]
//! draws. Block `k` draws from a ChaCha stream keyed by `(seed, k)` and the
//! block partial sums are reduced in block order, so the estimate is
//! bit-identical for any number of worker threads.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{
    covariances_equal, exact_equal_cov, project_pair, relate_supports, SupportRelation, Tolerances,
};
use crate::error::{Error, Result};
use crate::gaussian::{relative_eigen, whiten_sqrt, Gaussian};
use crate::normal;

/// Draws per independently seeded block.
pub const BLOCK_SIZE: usize = 4096;

/// Minimum Monte Carlo budget.
pub const MIN_SAMPLES: usize = 10_000;

/// Half-width multiplier of the reported confidence interval.
pub const CI_SIGMAS: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OracleMethod {
    Exact1D,
    ExactEqualCov,
    MonteCarlo,
    /// Supports differ; the distance is exactly 1.
    DisjointSupport,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleEstimate {
    pub estimate: f64,
    /// `3 * sample_sd / sqrt(samples)`; zero for exact methods.
    pub ci_halfwidth: f64,
    pub samples: usize,
    pub seed: u64,
    pub method: OracleMethod,
}

impl OracleEstimate {
    fn exact(value: f64, method: OracleMethod) -> Self {
        Self {
            estimate: value.clamp(0.0, 1.0),
            ci_halfwidth: 0.0,
            samples: 0,
            seed: 0,
            method,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.method != OracleMethod::MonteCarlo
    }

    /// `estimate +/- k * sigma` where `ci_halfwidth` is three sigma, clipped to `[0, 1]`.
    pub fn interval(&self, sigmas: f64) -> (f64, f64) {
        let half = self.ci_halfwidth * sigmas / CI_SIGMAS;
        (
            (self.estimate - half).max(0.0),
            (self.estimate + half).min(1.0),
        )
    }
}

fn univariate(g: &Gaussian) -> Result<(f64, f64)> {
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

/// Exact TV between one-dimensional Gaussians.
///
/// With unequal variances the densities cross at the two roots of
/// `(x-m1)^2/v1 - (x-m2)^2/v2 + ln(v1/v2) = 0`, and the distance is the
/// difference of the two laws' masses between the roots.
pub fn exact_tv_1d(g1: &Gaussian, g2: &Gaussian) -> Result<OracleEstimate> {
    let (m1, v1) = univariate(g1)?;
    let (m2, v2) = univariate(g2)?;
    if v1 == v2 {
        let m = (m1 - m2).abs() / v1.sqrt();
        return Ok(OracleEstimate::exact(
            normal::centered_mass(m),
            OracleMethod::Exact1D,
        ));
    }
    let a = 1.0 / v1 - 1.0 / v2;
    let b = -2.0 * (m1 / v1 - m2 / v2);
    let c = m1 * m1 / v1 - m2 * m2 / v2 + (v1 / v2).ln();
    // a and c have opposite signs whenever the variances differ
    let disc = (b * b - 4.0 * a * c).max(0.0);
    let (r1, r2) = if b == 0.0 {
        let r = (-c / a).sqrt();
        (-r, r)
    } else {
        let q = -0.5 * (b + b.signum() * disc.sqrt());
        let (x, y) = (q / a, c / q);
        (x.min(y), x.max(y))
    };
    let p = normal::interval_prob_scaled(m1, v1, r1, r2);
    let q = normal::interval_prob_scaled(m2, v2, r1, r2);
    Ok(OracleEstimate::exact((p - q).abs(), OracleMethod::Exact1D))
}

/// Log density ratio `log q(x) - log p(x)` for full-rank `p = N(mu1, S1)`,
/// `q = N(mu2, S2)`, written in the joint eigenbasis of the pair.
struct LogRatio {
    map: DMatrix<f64>,
    mu1: DVector<f64>,
    mu2: DVector<f64>,
    inv_scale: Vec<f64>,
    log_det_half: f64,
}

impl LogRatio {
    fn new(g1: &Gaussian, g2: &Gaussian, tol: &Tolerances) -> Result<Self> {
        let rel = relative_eigen(g1.cov(), g2.cov(), tol.rank_tol)?;
        let inv_scale = rel.gap.lambdas.iter().map(|l| 1.0 / (1.0 + l)).collect();
        let log_det_half = 0.5 * rel.gap.lambdas.iter().map(|l| l.ln_1p()).sum::<f64>();
        Ok(Self {
            map: rel.joint_map(),
            mu1: g1.mean().clone(),
            mu2: g2.mean().clone(),
            inv_scale,
            log_det_half,
        })
    }

    fn eval(&self, x: &DVector<f64>) -> f64 {
        let s = &self.map * (x - &self.mu1);
        let t = &self.map * (x - &self.mu2);
        let mut acc = -self.log_det_half;
        for i in 0..s.len() {
            acc += 0.5 * s[i] * s[i] - 0.5 * t[i] * t[i] * self.inv_scale[i];
        }
        acc
    }
}

/// Seeded Monte Carlo estimate of the TV distance.
///
/// Requires equal affine supports; singular pairs are evaluated in their
/// common range coordinates.
pub fn mc_tv(
    g1: &Gaussian,
    g2: &Gaussian,
    samples: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<OracleEstimate> {
    if samples < MIN_SAMPLES {
        return Err(Error::TooFewSamples {
            min: MIN_SAMPLES,
            got: samples,
        });
    }
    let done = |estimate: f64, ci_halfwidth: f64| OracleEstimate {
        estimate,
        ci_halfwidth,
        samples,
        seed,
        method: OracleMethod::MonteCarlo,
    };
    let range = match relate_supports(g1, g2, tol)? {
        SupportRelation::Disjoint { .. } => return Err(Error::SupportMismatch),
        SupportRelation::SamePoint => return Ok(done(0.0, 0.0)),
        SupportRelation::Common(range) => range,
    };
    if g1 == g2 {
        return Ok(done(0.0, 0.0));
    }
    let reduced;
    let (p, q) = if range.is_full_rank() {
        (g1, g2)
    } else {
        reduced = project_pair(g1, g2, range.basis())?;
        (&reduced.0, &reduced.1)
    };

    let sqrt_cov = whiten_sqrt(p.cov());
    let ratio = LogRatio::new(p, q, tol)?;
    let dim = p.dim();
    let blocks = samples.div_ceil(BLOCK_SIZE);
    let partials: Vec<(f64, f64)> = (0..blocks)
        .into_par_iter()
        .map(|block| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(block as u64);
            let n = BLOCK_SIZE.min(samples - block * BLOCK_SIZE);
            let mut z = DVector::zeros(dim);
            let (mut sum, mut sum_sq) = (0.0, 0.0);
            for _ in 0..n {
                for zi in z.iter_mut() {
                    *zi = StandardNormal.sample(&mut rng);
                }
                let x = p.mean() + &sqrt_cov * &z;
                let w = (-ratio.eval(&x).exp_m1()).max(0.0);
                sum += w;
                sum_sq += w * w;
            }
            (sum, sum_sq)
        })
        .collect();
    let (sum, sum_sq) = partials
        .iter()
        .fold((0.0, 0.0), |(a, b), &(s, ss)| (a + s, b + ss));
    let n = samples as f64;
    let mean = sum / n;
    let var = ((sum_sq - n * mean * mean) / (n - 1.0)).max(0.0);
    Ok(done(mean.clamp(0.0, 1.0), CI_SIGMAS * (var / n).sqrt()))
}

/// Best available reference value: exact whenever a closed form applies,
/// Monte Carlo with `budget` draws otherwise.
pub fn oracle(
    g1: &Gaussian,
    g2: &Gaussian,
    budget: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<OracleEstimate> {
    let range = match relate_supports(g1, g2, tol)? {
        SupportRelation::Disjoint { .. } => {
            return Ok(OracleEstimate::exact(1.0, OracleMethod::DisjointSupport))
        }
        SupportRelation::SamePoint => {
            return Ok(OracleEstimate::exact(0.0, OracleMethod::ExactEqualCov))
        }
        SupportRelation::Common(range) => range,
    };
    if !range.is_full_rank() {
        let (h1, h2) = project_pair(g1, g2, range.basis())?;
        return oracle(&h1, &h2, budget, seed, tol);
    }
    if g1.dim() == 1 {
        return exact_tv_1d(g1, g2);
    }
    if covariances_equal(g1.cov(), g2.cov()) {
        let exact = exact_equal_cov(g1.mean(), g2.mean(), g1.cov(), tol)?;
        return Ok(OracleEstimate::exact(
            exact.lower,
            OracleMethod::ExactEqualCov,
        ));
    }
    mc_tv(g1, g2, budget, seed, tol)
}
