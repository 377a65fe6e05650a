//! Favard decay table for the gasket with both model fits.

use favard::experiments::{fit_model, run_decay, DecayModel, ExperimentConfig};

fn main() -> favard::Result<()> {
    let config = ExperimentConfig {
        n_min: 2,
        n_max: 8,
        ..Default::default()
    };
    let run = run_decay(&config)?;
    for row in &run.rows {
        println!("n = {}  Fav = {:.6}", row.n, row.favard);
    }
    let points: Vec<(f64, f64)> = run.rows.iter().map(|r| (r.n as f64, r.favard)).collect();
    for model in [DecayModel::Power, DecayModel::Sqrtlog] {
        let fit = fit_model(&points, model)?;
        println!(
            "{model:?}: c = {:.4}, p = {:.4}, r² = {:.5}",
            fit.scale, fit.exponent, fit.r_squared
        );
    }
    Ok(())
}
