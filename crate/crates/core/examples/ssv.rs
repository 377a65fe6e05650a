//! Certified brackets on the set where the high-frequency product is small.

use favard::fourier::{ssv_detect, ssv_double_integral, ssv_weighted_integral};

fn main() -> favard::Result<()> {
    let (n, m, ell) = (4, 2, 2);
    for depth in 0..=4 {
        let r = ssv_detect(1.0, n, m, ell, depth)?;
        println!(
            "depth {depth}: {:>5} cells, |SSV| in [{:.4}, {:.4}]",
            r.cells.len(),
            r.lower_measure,
            r.upper_measure
        );
    }
    let w = ssv_weighted_integral(1.0, n, m, ell, 3)?;
    println!("weighted integral in [{:.4}, {:.4}]", w.lower, w.upper);
    let d = ssv_double_integral((0.0, 1.0), 8, n, m, ell, 2)?;
    println!(
        "t-averaged: [{:.4}, {:.4}], reference {:.4}, ratio {:.4}",
        d.lower, d.upper, d.reference, d.upper_ratio
    );
    Ok(())
}
