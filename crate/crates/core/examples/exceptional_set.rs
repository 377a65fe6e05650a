//! Scans the angles where the maximal multiplicity function has a large
//! level set.

use favard::multiplicity::exceptional_set_scan;
use favard::selfsimilar::gasket_system;

fn main() -> favard::Result<()> {
    let gasket = gasket_system();
    for levels in [4, 6, 8] {
        let scan = exceptional_set_scan(&gasket, levels, 0.09, 600)?;
        println!(
            "N = {levels}: K = {:.4}, |E| ≈ {:.4} of π, bound {:?}, satisfied {:?}",
            scan.k_threshold, scan.e_measure_full, scan.bound, scan.satisfies_bound
        );
    }
    Ok(())
}
