//! Favard length of gasket generations by midpoint quadrature over the
//! symmetry period.

use favard::experiments::default_nodes;
use favard::geometry::favard_quadrature;
use favard::selfsimilar::{disc_set, gasket_system};

fn main() -> favard::Result<()> {
    let gasket = gasket_system();
    let period = Some(gasket.projection_period());
    for n in 0..=8 {
        let set = disc_set(&gasket, n)?;
        let nodes = default_nodes(n);
        println!(
            "n = {n}  nodes = {nodes:>6}  Fav = {:.8}",
            favard_quadrature(&set, nodes, period)?
        );
    }
    Ok(())
}
