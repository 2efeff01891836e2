//! Standard normal probabilities, evaluated through `erf`/`erfc` so that
//! tail and small-interval probabilities keep their relative accuracy.

use libm::{erf, erfc};
use std::f64::consts::SQRT_2;

/// `Phi(x)`, the standard normal CDF.
pub fn cdf(x: f64) -> f64 {
    0.5 * erfc(-x / SQRT_2)
}

/// `P{N(0,1) in [a, b]}` for `a <= b`.
pub fn interval_prob(a: f64, b: f64) -> f64 {
    if a >= b {
        return 0.0;
    }
    if a >= 0.0 {
        0.5 * (erfc(a / SQRT_2) - erfc(b / SQRT_2))
    } else if b <= 0.0 {
        0.5 * (erfc(-b / SQRT_2) - erfc(-a / SQRT_2))
    } else {
        0.5 * (erf(b / SQRT_2) - erf(a / SQRT_2))
    }
}

/// `P{N(mean, variance) in [a, b]}`.
pub fn interval_prob_scaled(mean: f64, variance: f64, a: f64, b: f64) -> f64 {
    let sd = variance.sqrt();
    interval_prob((a - mean) / sd, (b - mean) / sd)
}

/// `P{N(0,1) in [-m/2, m/2]} = 2 Phi(m/2) - 1`.
pub fn centered_mass(m: f64) -> f64 {
    erf(m.abs() / (2.0 * SQRT_2))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_values() {
        assert!((cdf(0.0) - 0.5).abs() < 1e-16);
        // scipy.stats.norm.cdf(1.0)
        assert!((cdf(1.0) - 0.8413447460685429).abs() < 1e-15);
        assert!((centered_mass(1.0) - 0.38292492254802624).abs() < 1e-15);
        assert!((interval_prob(-1.0, 1.0) - 0.6826894921370859).abs() < 1e-15);
        // far tail keeps relative accuracy
        let tail = interval_prob(10.0, 11.0);
        assert!((tail / 7.61966195820302e-24 - 1.0).abs() < 1e-9);
        assert_eq!(interval_prob(1.0, 1.0), 0.0);
    }
}
