//! Monte Carlo reference values and their reproducibility.

use gaussian_tv::{mc_tv, oracle, Gaussian, Tolerances};
use nalgebra::{DMatrix, DVector};

fn main() -> gaussian_tv::Result<()> {
    let tol = Tolerances::default();
    let p = Gaussian::new(DVector::zeros(2), DMatrix::identity(2, 2))?;
    let q = Gaussian::new(DVector::zeros(2), DMatrix::identity(2, 2) * 2.0)?;

    for n in [10_000, 100_000, 1_000_000] {
        let e = mc_tv(&p, &q, n, 42, &tol)?;
        println!("n = {n:>9}: {:.5} +/- {:.5}", e.estimate, e.ci_halfwidth);
    }
    println!("closed form: 0.25");

    // the block layout fixes the result for a given seed
    let a = mc_tv(&p, &q, 50_000, 9, &tol)?;
    let b = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
        .install(|| mc_tv(&p, &q, 50_000, 9, &tol))?;
    println!(
        "seed 9, default pool vs one thread: {} / {}",
        a.estimate, b.estimate
    );

    // dispatch picks an exact method where one exists
    let r = Gaussian::new(DVector::from_vec(vec![1.0, 0.0]), DMatrix::identity(2, 2))?;
    println!("{:?}", oracle(&p, &r, 100_000, 0, &tol)?);
    Ok(())
}
