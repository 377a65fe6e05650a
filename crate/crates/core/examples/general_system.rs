//! Runs the decay experiment on a user-defined system loaded from JSON.

use favard::experiments::{run_general, ExperimentConfig};
use favard::SimilaritySystem;

fn main() -> favard::Result<()> {
    let system = SimilaritySystem::from_json(
        r#"{"k": 4, "ratio": 0.25, "centers": [[0.5, 0], [0, 0.5], [-0.5, 0], [0, -0.5]], "disjoint": true}"#,
    )?;
    let config = ExperimentConfig {
        n_min: 1,
        n_max: 6,
        ..Default::default()
    };
    let run = run_general(&system, &config)?;
    for row in &run.rows {
        println!("n = {}  Fav = {:.6}", row.n, row.favard);
    }
    println!(
        "power:   p = {:.4}, r² = {:.5}",
        run.power.exponent, run.power.r_squared
    );
    println!(
        "sqrtlog: p = {:.4}, r² = {:.5}",
        run.sqrtlog.exponent, run.sqrtlog.r_squared
    );
    Ok(())
}
