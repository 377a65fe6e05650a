//! Decay experiments and model fitting.
//!
//! Favard lengths of successive levels are fitted against two laws:
//!
//! * `power`: `Fav(n) ≈ C n^{-c}`, linear in `(log n, log Fav)`;
//! * `sqrtlog`: `Fav(n) ≈ C exp(-c sqrt(log n))`, linear in
//!   `(sqrt(log n), log Fav)`.
//!
//! The quadrature node count grows with the level,
//! `M(n) = max(1000, ⌊50 · 3^{n/2}⌋)`. `|proj_θ|` is Lipschitz in `θ` with
//! constant at most the diameter of the set, so the midpoint error is
//! `O(M^{-2})` and `M(n)` keeps it well below the gaps between consecutive
//! levels.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::favard_quadrature;
use crate::selfsimilar::{disc_set, SimilaritySystem};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum DecayModel {
    #[default]
    Power,
    Sqrtlog,
}

impl DecayModel {
    fn transform(self, n: f64) -> Result<f64> {
        match self {
            DecayModel::Power if n > 0.0 => Ok(n.ln()),
            DecayModel::Sqrtlog if n >= 1.0 => Ok(n.ln().sqrt()),
            _ => Err(Error::Domain(format!(
                "level {n} is outside the {self:?} model domain"
            ))),
        }
    }

    /// `C · g(n)` for fitted parameters.
    pub fn eval(self, c_scale: f64, c_exp: f64, n: f64) -> f64 {
        match self {
            DecayModel::Power => c_scale * n.powf(-c_exp),
            DecayModel::Sqrtlog => c_scale * (-c_exp * n.ln().sqrt()).exp(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecayFit {
    pub model: DecayModel,
    /// Prefactor `C`.
    pub scale: f64,
    /// Exponent `c`, with sign; decay means `c > 0`.
    pub exponent: f64,
    pub r_squared: f64,
    /// `value − C g(n)` at each input point.
    pub residuals: Vec<f64>,
}

/// Ordinary least squares in the model's transformed coordinates.
pub fn fit_model(points: &[(f64, f64)], model: DecayModel) -> Result<DecayFit> {
    if points.len() < 3 {
        return Err(Error::Precondition(format!(
            "{} points cannot determine a fit with residuals; need at least 3",
            points.len()
        )));
    }
    if let Some(&(n, v)) = points.iter().find(|p| !(p.1 > 0.0)) {
        return Err(Error::Domain(format!(
            "value {v} at n = {n} is not positive"
        )));
    }
    let us: Vec<f64> = points
        .iter()
        .map(|&(n, _)| model.transform(n))
        .collect::<Result<_>>()?;
    let ws: Vec<f64> = points.iter().map(|&(_, v)| v.ln()).collect();
    let len = points.len() as f64;
    let mean_u = us.iter().sum::<f64>() / len;
    let mean_w = ws.iter().sum::<f64>() / len;
    let suu: f64 = us.iter().map(|u| (u - mean_u).powi(2)).sum();
    if suu == 0.0 {
        return Err(Error::Precondition(
            "all levels coincide in transformed coordinates".into(),
        ));
    }
    let suw: f64 = us
        .iter()
        .zip(&ws)
        .map(|(u, w)| (u - mean_u) * (w - mean_w))
        .sum();
    let slope = suw / suu;
    let intercept = mean_w - slope * mean_u;
    let ss_res: f64 = us
        .iter()
        .zip(&ws)
        .map(|(u, w)| (w - intercept - slope * u).powi(2))
        .sum();
    let ss_tot: f64 = ws.iter().map(|w| (w - mean_w).powi(2)).sum();
    let r_squared = if ss_tot > 0.0 {
        (1.0 - ss_res / ss_tot).clamp(0.0, 1.0)
    } else {
        1.0
    };
    let scale = intercept.exp();
    let exponent = -slope;
    let residuals = points
        .iter()
        .map(|&(n, v)| v - model.eval(scale, exponent, n))
        .collect();
    Ok(DecayFit {
        model,
        scale,
        exponent,
        r_squared,
        residuals,
    })
}

/// Default node count for level `n`: `max(1000, ⌊50 · 3^{n/2}⌋)`.
pub fn default_nodes(level: usize) -> usize {
    let scaled = (50.0 * 3f64.powf(level as f64 / 2.0)).floor() as usize;
    scaled.max(1000)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentConfig {
    /// `gasket` or a path to a JSON system document.
    pub system: String,
    pub n_min: usize,
    pub n_max: usize,
    /// Fixed quadrature node count; `None` uses [`default_nodes`].
    pub nodes: Option<usize>,
    pub mc_samples: u64,
    pub seed: u64,
    pub eps0: f64,
    /// Multiplier in `ℓ = α m`.
    pub alpha: f64,
    pub theta_grid: usize,
    pub model: DecayModel,
    pub output: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            system: "gasket".into(),
            n_min: 2,
            n_max: 9,
            nodes: None,
            mc_samples: 1_000_000,
            seed: 0,
            eps0: 0.09,
            alpha: 2.0,
            theta_grid: 2000,
            model: DecayModel::Power,
            output: None,
        }
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let config: Self = serde_json::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_min > self.n_max {
            return Err(Error::Precondition(format!(
                "empty level range {}..={}",
                self.n_min, self.n_max
            )));
        }
        if !(self.eps0 > 0.0 && self.eps0 < 1.0 / 11.0) {
            return Err(Error::Precondition(format!(
                "ε₀ = {} is not in (0, 1/11)",
                self.eps0
            )));
        }
        if self.nodes == Some(0) || self.mc_samples == 0 || self.theta_grid == 0 {
            return Err(Error::Precondition("all counts must be positive".into()));
        }
        if !(self.alpha > 0.0) {
            return Err(Error::Precondition("α must be positive".into()));
        }
        Ok(())
    }

    pub fn nodes_for(&self, level: usize) -> usize {
        self.nodes.unwrap_or_else(|| default_nodes(level))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DecayRow {
    pub n: usize,
    pub nodes: usize,
    pub favard: f64,
}

/// The Favard table of a system over a level range.
pub fn decay_table(system: &SimilaritySystem, config: &ExperimentConfig) -> Result<Vec<DecayRow>> {
    config.validate()?;
    let period = system.projection_period();
    (config.n_min..=config.n_max)
        .map(|n| {
            let set = disc_set(system, n)?;
            let nodes = config.nodes_for(n);
            let favard = favard_quadrature(&set, nodes, Some(period))?;
            if !favard.is_finite() {
                return Err(Error::NonFinite { n, value: favard });
            }
            Ok(DecayRow { n, nodes, favard })
        })
        .collect()
}

fn points(rows: &[DecayRow]) -> Vec<(f64, f64)> {
    rows.iter().map(|r| (r.n as f64, r.favard)).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecayRun {
    pub rows: Vec<DecayRow>,
    pub fit: DecayFit,
}

/// Favard table for the configured system and a fit of the configured model.
pub fn run_decay(config: &ExperimentConfig) -> Result<DecayRun> {
    let system = SimilaritySystem::resolve(&config.system)?;
    let rows = decay_table(&system, config)?;
    let fit = fit_model(&points(&rows), config.model)?;
    Ok(DecayRun { rows, fit })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GeneralRun {
    pub rows: Vec<DecayRow>,
    pub power: DecayFit,
    pub sqrtlog: DecayFit,
}

/// As [`run_decay`] for an arbitrary validated system, fitting both models.
pub fn run_general(system: &SimilaritySystem, config: &ExperimentConfig) -> Result<GeneralRun> {
    system.validate().into_result()?;
    let rows = decay_table(system, config)?;
    let pts = points(&rows);
    Ok(GeneralRun {
        power: fit_model(&pts, DecayModel::Power)?,
        sqrtlog: fit_model(&pts, DecayModel::Sqrtlog)?,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::selfsimilar::gasket_system;
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn synthetic(model: DecayModel, c_scale: f64, c_exp: f64) -> Vec<(f64, f64)> {
        (2..=9)
            .map(|n| (n as f64, model.eval(c_scale, c_exp, n as f64)))
            .collect()
    }

    #[test]
    fn exact_power_data() {
        let fit = fit_model(&synthetic(DecayModel::Power, 5.0, 0.3), DecayModel::Power).unwrap();
        assert!((fit.scale - 5.0).abs() < 1e-9);
        assert!((fit.exponent - 0.3).abs() < 1e-9);
        assert!((fit.r_squared - 1.0).abs() < 1e-9);
        assert!(fit.residuals.iter().all(|r| r.abs() < 1e-12));
    }

    #[test]
    fn exact_sqrtlog_data() {
        let fit = fit_model(
            &synthetic(DecayModel::Sqrtlog, 2.0, 0.4),
            DecayModel::Sqrtlog,
        )
        .unwrap();
        assert!((fit.scale - 2.0).abs() < 1e-9);
        assert!((fit.exponent - 0.4).abs() < 1e-9);
        assert!((fit.r_squared - 1.0).abs() < 1e-9);
    }

    #[test]
    fn fit_errors() {
        assert!(matches!(
            fit_model(&[(2.0, 1.0), (3.0, 0.5)], DecayModel::Power),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            fit_model(&[(2.0, 1.0), (3.0, 0.0), (4.0, 0.2)], DecayModel::Power),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn noisy_power_data() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let pts: Vec<(f64, f64)> = (2..=30)
            .map(|n| {
                let noise = 1.0 + 0.01 * (2.0 * rng.random::<f64>() - 1.0);
                (n as f64, 3.0 * (n as f64).powf(-0.5) * noise)
            })
            .collect();
        let fit = fit_model(&pts, DecayModel::Power).unwrap();
        assert!((fit.exponent - 0.5).abs() < 0.05 * 0.5);
    }

    #[test]
    fn config_validation() {
        assert!(ExperimentConfig::default().validate().is_ok());
        let bad = ExperimentConfig {
            eps0: 0.1,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let empty = ExperimentConfig {
            n_min: 5,
            n_max: 4,
            ..Default::default()
        };
        assert!(empty.validate().is_err());
        let parsed =
            ExperimentConfig::from_json(r#"{"n_min": 1, "n_max": 3, "model": "sqrtlog"}"#).unwrap();
        assert_eq!(parsed.model, DecayModel::Sqrtlog);
        assert_eq!(parsed.system, "gasket");
    }

    #[test]
    fn default_node_rule() {
        assert_eq!(default_nodes(2), 1000);
        assert_eq!(default_nodes(8), 4050);
        assert_eq!(default_nodes(10), 12150);
    }

    #[test]
    fn single_map_decays_exponentially() {
        let rho = 0.5;
        let one = SimilaritySystem::new(rho, vec![Complex64::new(0.0, 0.0)], false).unwrap();
        let config = ExperimentConfig {
            n_min: 2,
            n_max: 7,
            nodes: Some(50),
            ..Default::default()
        };
        let run = run_general(&one, &config).unwrap();
        for row in &run.rows {
            let exact = 2.0 * rho.powi(row.n as i32);
            assert!((row.favard - exact).abs() <= 1e-15 * exact);
        }
        assert!(run.power.r_squared < 0.999);
    }

    #[test]
    fn gasket_general_route_matches_decay() {
        let config = ExperimentConfig {
            n_min: 1,
            n_max: 4,
            nodes: Some(300),
            ..Default::default()
        };
        let decay = run_decay(&config).unwrap();
        let general = run_general(&gasket_system(), &config).unwrap();
        assert_eq!(decay.rows, general.rows);
        assert_eq!(decay.fit, general.power);
    }
}
