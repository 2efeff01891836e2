//! Same-mean bounds for positive definite and singular covariances.

use gaussian_tv::{assess, bound_same_mean, relative_spectrum, Gaussian, Tolerances};
use nalgebra::{DMatrix, DVector};

fn main() -> gaussian_tv::Result<()> {
    let tol = Tolerances::default();

    let s1 = DMatrix::identity(2, 2);
    let s2 = DMatrix::from_diagonal(&DVector::from_vec(vec![1.21, 1.0]));
    let gap = relative_spectrum(&s1, &s2, tol.rank_tol)?;
    println!("lambdas {:?}, rho {:.4}", gap.lambdas.as_slice(), gap.rho);
    let b = bound_same_mean(&s1, &s2, &tol)?;
    println!("TV in [{:.4}, {:.4}]", b.lower, b.upper);

    // a plane in R^3: both covariances are restricted to it first
    let flat1 = DMatrix::from_row_slice(3, 3, &[2.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0]);
    let flat2 = DMatrix::from_row_slice(3, 3, &[1.0, 0.0, 0.0, 0.0, 1.5, 0.0, 0.0, 0.0, 0.0]);
    let b = bound_same_mean(&flat1, &flat2, &tol)?;
    println!("singular pair: TV in [{:.4}, {:.4}]", b.lower, b.upper);

    let mean = DVector::zeros(3);
    let report = assess(
        &Gaussian::new(mean.clone(), flat1)?,
        &Gaussian::new(mean, flat2)?,
        &tol,
    )?;
    println!("flags {:?}", report.flags);
    for i in &report.intervals {
        println!("  {:<14} [{:.4}, {:.4}]", i.method.name(), i.lower, i.upper);
    }
    Ok(())
}
