//! Builds the first few gasket generations and prints a few centers.

use favard::selfsimilar::{self, Address};
use favard::{Result, SimilaritySystem};

fn main() -> Result<()> {
    let gasket = selfsimilar::gasket_system();
    println!("gasket validates: {}", gasket.validate().passed());
    for level in 0..=6 {
        let set = selfsimilar::disc_set(&gasket, level)?;
        println!(
            "level {level}: {} discs of radius {:.6}, extent {:.6}",
            set.len(),
            set.radius(),
            set.extent()
        );
    }

    let addr = Address::from_gasket_digits(&[0, 0])?;
    println!("center of {addr}: {}", selfsimilar::center(&gasket, &addr)?);

    // A four-branch system that needs no disjointness exemption.
    let square = SimilaritySystem::from_json(
        r#"{"k": 4, "ratio": 0.25, "centers": [[0.5, 0], [0, 0.5], [-0.5, 0], [0, -0.5]], "disjoint": true}"#,
    )?;
    for check in &square.validate().checks {
        println!("{:>12}: {} ({})", check.name, check.passed, check.detail);
    }
    Ok(())
}
