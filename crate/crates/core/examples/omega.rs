//! Measures the sine-ratio inequality constant, checks telescoping, and
//! confirms that the planar small-value set sits in small squares.

use favard::fourier::{inequality_constant, omega_scan, telescoping_check};

fn main() -> favard::Result<()> {
    let a = inequality_constant(2048)?;
    println!("a ≈ {:.6} at ({:.4}, {:.4})", a.a, a.argmin.0, a.argmin.1);
    println!(
        "telescoping error at x = 0.7, m = 6: {:.1e}",
        telescoping_check(0.7, 6)?
    );
    for m in 0..=2 {
        let s = omega_scan(m, 2, (8 * 3usize.pow(m + 1)).max(256), a.a)?;
        println!(
            "m = {m}: {} Ω points, {} outside the bound, {} squares touched of {}",
            s.omega_count, s.containment_violation_count, s.touched_squares, s.square_count
        );
    }
    Ok(())
}
