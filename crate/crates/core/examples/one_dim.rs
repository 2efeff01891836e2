//! One-dimensional bounds against the exact distance.

use gaussian_tv::{bound_1d, bound_1d_symmetric, exact_tv_1d, Gaussian};

fn main() -> gaussian_tv::Result<()> {
    let cases = [
        (0.0, 1.0, 1.0, 1.0),
        (0.0, 1.0, 0.0, 4.0),
        (0.0, 4.0, 0.5, 1.0),
        (2.0, 0.5, -1.0, 3.0),
    ];
    println!(
        "{:>22} {:>10} {:>22} {:>22}",
        "pair", "exact", "bound (p, q)", "symmetric"
    );
    for (m1, v1, m2, v2) in cases {
        let p = Gaussian::univariate(m1, v1)?;
        let q = Gaussian::univariate(m2, v2)?;
        let exact = exact_tv_1d(&p, &q)?.estimate;
        let one = bound_1d(&p, &q)?;
        let sym = bound_1d_symmetric(&p, &q)?;
        println!(
            "{:>22} {exact:>10.6} {:>22} {:>22}",
            format!("N({m1},{v1}) N({m2},{v2})"),
            format!("[{:.4}, {:.4}]", one.lower, one.upper),
            format!("[{:.4}, {:.4}]", sym.lower, sym.upper),
        );
    }
    Ok(())
}
