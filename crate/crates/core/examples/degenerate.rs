//! Rank-deficient covariances: common supports are reduced, differing
//! supports are at distance 1.

use gaussian_tv::{affine_support, assess, oracle, Gaussian, Tolerances};

fn main() -> gaussian_tv::Result<()> {
    let tol = Tolerances::default();
    let line =
        |x: f64, y: f64, var: f64| Gaussian::from_rows(&[x, y], &[vec![var, 0.0], vec![0.0, 0.0]]);

    let cases = [
        (
            "shift along the line",
            line(1.0, 0.0, 1.0)?,
            line(0.0, 0.0, 1.5)?,
        ),
        ("parallel lines", line(0.0, 1.0, 1.0)?, line(0.0, 0.0, 1.0)?),
        (
            "point vs line",
            Gaussian::from_rows(&[0.0, 0.0], &[vec![0.0; 2], vec![0.0; 2]])?,
            line(0.0, 0.0, 1.0)?,
        ),
    ];
    for (name, p, q) in cases {
        let r = assess(&p, &q, &tol)?;
        let e = oracle(&p, &q, 100_000, 0, &tol)?;
        println!(
            "{name:<22} [{:.4}, {:.4}]  oracle {:.4} ({:?})  flags {:?}",
            r.best_lower, r.best_upper, e.estimate, e.method, r.flags
        );
    }

    let s = affine_support(&line(1.0, 0.0, 1.0)?, tol.rank_tol)?;
    println!(
        "support point {:?}, basis {:?}",
        s.point.as_slice(),
        s.basis.basis().as_slice()
    );
    Ok(())
}
