//! Buffon needle estimate compared with the quadrature value.

use favard::geometry::{buffon_mc, favard_quadrature, DEFAULT_OFFSET_HALFWIDTH};
use favard::selfsimilar::{disc_set, gasket_system};

fn main() -> favard::Result<()> {
    let gasket = gasket_system();
    let set = disc_set(&gasket, 4)?;
    let exact = favard_quadrature(&set, 10_000, Some(gasket.projection_period()))?;
    println!("quadrature: {exact:.6}");
    for seed in 0..4 {
        let e = buffon_mc(&set, 1_000_000, seed, DEFAULT_OFFSET_HALFWIDTH)?;
        let z = (e.favard_estimate - exact) / e.standard_error;
        println!(
            "seed {seed}: {:.6} ± {:.6}  ({} hits, z = {z:+.2})",
            e.favard_estimate, e.standard_error, e.hits
        );
    }
    Ok(())
}
