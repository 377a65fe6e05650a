//! Fourier transform of the natural measure as a Riesz-type product, checked
//! against the direct sum over projected centers.

use favard::fourier::{nu_hat, nu_hat_direct, product_eval, Parameterization, ProductSpec};

fn main() -> favard::Result<()> {
    let theta = 0.3;
    for x in [1.0, 10.0, 100.0, 1000.0] {
        let p = nu_hat(6, theta, x)?;
        let d = nu_hat_direct(6, theta, x)?;
        println!(
            "x = {x:>6}: product {p:.6}, direct {d:.6}, |diff| = {:.1e}",
            (p - d).norm()
        );
    }

    // Long products accumulate in log space.
    let spec = ProductSpec::new(Parameterization::T(0.5), 0, 80)?;
    for x in [3.0, 300.0, 3.0e4] {
        let v = product_eval(&spec, x);
        println!(
            "t-form, 81 factors, x = {x:>8}: log|P| = {:.4}",
            v.log_magnitude
        );
    }
    Ok(())
}
