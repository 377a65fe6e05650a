//! The projection multiplicity function of one generation at one angle, its
//! norms, level sets and the chain of elementary inequalities.

use favard::multiplicity::{estimate_chain_report, maximal_function, multiplicity_function};
use favard::selfsimilar::{disc_set, gasket_system};

fn main() -> favard::Result<()> {
    let gasket = gasket_system();
    let theta = 0.4;
    let n = 5;
    let set = disc_set(&gasket, n)?;
    let f = multiplicity_function(&set, theta);
    println!(
        "pieces: {}, max value: {}, mass: {:.15}",
        f.piece_count(),
        f.max_value(),
        f.integral()
    );
    println!(
        "||f||_2 = {:.6}, ||f||_inf = {}",
        f.lp_norm(2.0)?,
        f.lp_norm(f64::INFINITY)?
    );

    let star = maximal_function(&gasket, n, theta)?;
    for k in [0.6, 1.0, 1.5, 2.0] {
        let r = estimate_chain_report(&set, theta, k, 2.0)?;
        println!(
            "K = {k}: |L| = {:.5}  |A_K| = {:.5}  |A*_K| = {:.5}  1/||f||² = {:.5}  mass split = {:.5}",
            r.measure_l,
            r.measure_ak,
            star.level_set(k)?.measure(),
            r.duality_bound,
            r.mass_split
        );
    }
    Ok(())
}
