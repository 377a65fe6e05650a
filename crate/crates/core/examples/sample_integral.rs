//! Picks a good sample level: the one with the smallest average of the
//! squared product over the top frequency band.

use favard::fourier::select_sample_level;
use favard::numeric::midpoints;

fn main() -> favard::Result<()> {
    let thetas: Vec<f64> = midpoints(0.0, std::f64::consts::PI / 3.0, 12).collect();
    let sel = select_sample_level(&thetas, 14, 0.09, 16)?;
    println!("m = {}, K = {:.4}", sel.m, sel.k_threshold);
    for (n, mean) in &sel.candidates {
        println!("n = {n}: mean integral {mean:.4}");
    }
    println!(
        "chosen n = {}, {} of {} angles are good",
        sel.chosen_n,
        sel.tilde_e.len(),
        thetas.len()
    );
    Ok(())
}
