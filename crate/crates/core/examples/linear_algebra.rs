//! The numerical primitives: ranges, relative spectra, square roots and
//! orthogonal complements.

use gaussian_tv::{
    affine_image, complement_basis, detect_range, inverse_sqrt_on_range, relative_spectrum,
    same_range, whiten_sqrt, Gaussian,
};
use nalgebra::{DMatrix, DVector};

fn main() -> gaussian_tv::Result<()> {
    let v = DVector::from_vec(vec![0.6, 0.8]);
    let range = detect_range(&(&v * v.transpose()), 1e-9)?;
    println!("rank {} basis {:?}", range.rank(), range.basis().as_slice());

    let other = detect_range(
        &DMatrix::from_row_slice(2, 2, &[0.36, 0.48, 0.48, 0.64]),
        1e-9,
    )?;
    println!("same range: {}", same_range(&range, &other, 1e-8));

    let s1 = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 4.0]));
    let s2 = DMatrix::from_diagonal(&DVector::from_vec(vec![2.0, 2.0]));
    let gap = relative_spectrum(&s1, &s2, 1e-9)?;
    println!("lambdas {:?} rho {:.6}", gap.lambdas.as_slice(), gap.rho);

    let c = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 2.0]);
    let root = whiten_sqrt(&c);
    println!("sqrt [[2,1],[1,2]] = {root}");
    println!(
        "inverse root on range: {}",
        inverse_sqrt_on_range(&c, 1e-9)?
    );

    let pi = complement_basis(&DVector::from_vec(vec![1.0, 2.0, 2.0]))?;
    println!("complement of (1,2,2): {pi}");

    let g = Gaussian::from_rows(&[0.0, 0.0], &[vec![1.0, 0.0], vec![0.0, 1.0]])?;
    let sum = affine_image(
        &g,
        &DMatrix::from_row_slice(1, 2, &[1.0, 1.0]),
        &DVector::zeros(1),
    )?;
    println!("X1 + X2 ~ N({}, {})", sum.mean()[0], sum.cov()[(0, 0)]);
    Ok(())
}
