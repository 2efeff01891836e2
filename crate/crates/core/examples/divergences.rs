//! Pinsker (KL) and Hellinger bounds.

use gaussian_tv::{
    bound_hellinger, bound_pinsker_kl, hellinger_squared, oracle, Gaussian, Tolerances,
};

fn main() -> gaussian_tv::Result<()> {
    let tol = Tolerances::default();
    let p = Gaussian::from_rows(&[0.0, 0.0], &[vec![1.0, 0.3], vec![0.3, 1.0]])?;
    let q = Gaussian::from_rows(&[0.5, -0.2], &[vec![2.0, 0.0], vec![0.0, 0.5]])?;

    let kl_pq = bound_pinsker_kl(&p, &q, &tol)?;
    let kl_qp = bound_pinsker_kl(&q, &p, &tol)?;
    println!(
        "sqrt(KL/2) upper bounds: {:.4} and {:.4} (argument orders)",
        kl_pq.upper, kl_qp.upper
    );

    let h2 = hellinger_squared(&p, &q, &tol)?;
    let h = bound_hellinger(&p, &q, &tol)?;
    println!("h^2 = {h2:.4}; TV in [{:.4}, {:.4}]", h.lower, h.upper);

    let e = oracle(&p, &q, 400_000, 1, &tol)?;
    println!(
        "Monte Carlo TV = {:.4} +/- {:.4}",
        e.estimate, e.ci_halfwidth
    );
    Ok(())
}
