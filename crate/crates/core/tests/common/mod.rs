#![allow(dead_code)]

use gaussian_tv::{Gaussian, OracleEstimate};
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn gaussian_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| rng.sample(StandardNormal))
}

pub fn gaussian_vector(rng: &mut ChaCha8Rng, d: usize) -> DVector<f64> {
    DVector::from_fn(d, |_, _| rng.sample(StandardNormal))
}

/// Orthonormal columns spanning the column space of `m` (full column rank assumed).
pub fn orthonormal_columns(m: DMatrix<f64>) -> DMatrix<f64> {
    let cols = m.ncols();
    let q = m.qr().q();
    q.columns(0, cols).into_owned()
}

pub fn random_orthogonal(rng: &mut ChaCha8Rng, d: usize) -> DMatrix<f64> {
    orthonormal_columns(gaussian_matrix(rng, d, d))
}

/// `Q1 diag(s) Q2` with singular values log-uniform in `[1/spread, spread]`.
pub fn random_invertible(rng: &mut ChaCha8Rng, d: usize, spread: f64) -> DMatrix<f64> {
    let q1 = random_orthogonal(rng, d);
    let q2 = random_orthogonal(rng, d);
    let s = DVector::from_fn(d, |_, _| {
        (spread.ln() * (2.0 * rng.random::<f64>() - 1.0)).exp()
    });
    q1 * DMatrix::from_diagonal(&s) * q2
}

pub fn random_spd(rng: &mut ChaCha8Rng, d: usize, spread: f64) -> DMatrix<f64> {
    let a = random_invertible(rng, d, spread.sqrt());
    let m = &a * a.transpose();
    (&m + m.transpose()) * 0.5
}

pub fn random_gaussian(rng: &mut ChaCha8Rng, d: usize, spread: f64) -> Gaussian {
    Gaussian::new(gaussian_vector(rng, d), random_spd(rng, d, spread)).unwrap()
}

/// Four-standard-error window of an oracle estimate (`ci_halfwidth` is three).
pub fn four_sigma(e: &OracleEstimate) -> f64 {
    e.ci_halfwidth * 4.0 / 3.0
}

pub fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}
