//! Energy of exponential sums on the unit interval against the overlap count
//! of their frequencies.

use favard::salem::{
    energy_ratio, ratio_experiment, ExponentialSum, FrequencyLayout, RATIO_CEILING,
};

fn main() -> favard::Result<()> {
    let single = ExponentialSum::from_phases(vec![3.0], &[0.0])?;
    println!("single atom: {}", energy_ratio(&single)?);

    for layout in [
        FrequencyLayout::Uniform,
        FrequencyLayout::LatticePerturbed,
        FrequencyLayout::Clustered,
    ] {
        let r = ratio_experiment(2000, 100, 7, 100.0, layout)?;
        println!(
            "{layout:?}: max ratio {:.4} (ceiling {RATIO_CEILING}), worst k = {}",
            r.max_ratio,
            r.argmax.alphas.len()
        );
    }
    Ok(())
}
