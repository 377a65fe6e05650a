//! Command line front end. Exit codes: 0 on success, 2 on a precondition
//! violation, 3 when an enumeration budget is exhausted, 1 otherwise.

use std::f64::consts::PI;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::experiments::{self, DecayModel, ExperimentConfig};
use crate::fourier::{self, Parameterization, ProductSpec};
use crate::geometry::{self, DEFAULT_OFFSET_HALFWIDTH};
use crate::io::{self, MultiplicityRow};
use crate::multiplicity;
use crate::numeric::midpoints;
use crate::salem::{self, FrequencyLayout};
use crate::selfsimilar::{self, SimilaritySystem};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "favard",
    version,
    about = "Favard length and Buffon needle experiments for self-similar disc sets"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// `gasket` or a JSON system file.
    #[arg(long, default_value = "gasket")]
    pub system: String,
    /// Output file; stdout if omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Emit the level-n disc set.
    Generate {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        n: usize,
    },
    /// Projected length on a grid of angles.
    Project {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        n: usize,
        /// Single angle; otherwise a midpoint grid over [0, π).
        #[arg(long)]
        theta: Option<f64>,
        #[arg(long, default_value_t = 180)]
        nodes: usize,
    },
    /// Favard length by midpoint quadrature.
    Favard {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 10_000)]
        nodes: usize,
        /// Integrate over the full [0, π) instead of the symmetry period.
        #[arg(long)]
        full_range: bool,
    },
    /// Buffon needle Monte Carlo.
    Buffon {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_OFFSET_HALFWIDTH)]
        halfwidth: f64,
    },
    /// Multiplicity function: |L|, |A_K|, L2 norm and E membership.
    Multiplicity {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        n: usize,
        /// Single angle; otherwise a midpoint grid over [0, π).
        #[arg(long)]
        theta: Option<f64>,
        #[arg(long, default_value_t = 90)]
        nodes: usize,
        /// Level-set thresholds.
        #[arg(long = "k", value_delimiter = ',', default_value = "1")]
        k: Vec<f64>,
    },
    /// Exceptional angle set E_N.
    ExceptScan {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.09)]
        eps0: f64,
        #[arg(long, default_value_t = 2000)]
        nodes: usize,
    },
    /// Product traces, or sample-integral level selection with --sample.
    FourierScan {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 0.3)]
        theta: f64,
        /// Use the t-form with this parameter instead of θ.
        #[arg(long)]
        t: Option<f64>,
        #[arg(long, default_value_t = 1)]
        k_lo: i32,
        #[arg(long, default_value_t = 6)]
        k_hi: i32,
        #[arg(long, default_value_t = 0.0)]
        x_min: f64,
        #[arg(long, default_value_t = 100.0)]
        x_max: f64,
        #[arg(long, default_value_t = 1000)]
        nodes: usize,
        /// Run the sample-integral selection for N = --n.
        #[arg(long)]
        sample: bool,
        #[arg(long, default_value_t = 12)]
        n: usize,
        #[arg(long, default_value_t = 0.09)]
        eps0: f64,
        #[arg(long, default_value_t = 16)]
        steps: usize,
    },
    /// Certified set-of-small-values brackets.
    Ssv {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        /// Threshold exponent; defaults to round(α m).
        #[arg(long)]
        ell: Option<u32>,
        #[arg(long, default_value_t = 2.0)]
        alpha: f64,
        #[arg(long, default_value_t = 3)]
        depth: u32,
    },
    /// Ω scan and the sine-square containment chain.
    Omega {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        ell: u32,
        /// Points per side; defaults to 8·3^(m+1) rounded up to 256.
        #[arg(long)]
        grid: Option<usize>,
        /// Grid for measuring the inequality constant.
        #[arg(long, default_value_t = 2048)]
        a_grid: usize,
    },
    /// Exponential-sum energy versus overlap energy.
    Salem {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 100)]
        k_max: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100.0)]
        scale: f64,
        #[arg(long, value_enum, default_value_t = Layout::Uniform)]
        layout: Layout,
    },
    /// Favard decay table and model fits.
    Decay {
        #[command(flatten)]
        common: Common,
        /// JSON experiment config; flags below override nothing when given.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value_t = 2)]
        n_min: usize,
        #[arg(long, default_value_t = 9)]
        n: usize,
        #[arg(long)]
        nodes: Option<usize>,
        #[arg(long, value_enum, default_value_t = DecayModel::Power)]
        model: DecayModel,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.09)]
        eps0: f64,
        #[arg(long, default_value_t = 2.0)]
        alpha: f64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Layout {
    Uniform,
    Lattice,
    Clustered,
}

impl From<Layout> for FrequencyLayout {
    fn from(l: Layout) -> Self {
        match l {
            Layout::Uniform => FrequencyLayout::Uniform,
            Layout::Lattice => FrequencyLayout::LatticePerturbed,
            Layout::Clustered => FrequencyLayout::Clustered,
        }
    }
}

fn json<T: Serialize>(common: &Common, value: &T) -> Result<()> {
    io::write_json(io::sink(common.out.as_deref())?, value)
}

fn angles(theta: Option<f64>, nodes: usize) -> Result<Vec<f64>> {
    match theta {
        Some(t) => Ok(vec![t]),
        None if nodes > 0 => Ok(midpoints(0.0, PI, nodes).collect()),
        None => Err(Error::Precondition("need at least one angle".into())),
    }
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Generate { common, n } => {
            let system = SimilaritySystem::resolve(&common.system)?;
            let set = selfsimilar::disc_set(&system, n)?;
            let mut rows = Vec::with_capacity(set.len());
            selfsimilar::for_each_center(&system, n, |addr, z| {
                rows.push((addr.to_string(), z));
            });
            match common.format {
                Format::Csv => io::write_csv(
                    io::sink(common.out.as_deref())?,
                    &["address", "re", "im", "radius"],
                    rows.iter().map(|(a, z)| {
                        vec![
                            a.clone(),
                            z.re.to_string(),
                            z.im.to_string(),
                            set.radius().to_string(),
                        ]
                    }),
                ),
                Format::Json => {
                    #[derive(Serialize)]
                    struct Doc {
                        level: usize,
                        radius: f64,
                        centers: Vec<[f64; 2]>,
                    }
                    json(
                        &common,
                        &Doc {
                            level: n,
                            radius: set.radius(),
                            centers: set.centers().iter().map(|z| [z.re, z.im]).collect(),
                        },
                    )
                }
            }
        }
        Command::Project {
            common,
            n,
            theta,
            nodes,
        } => {
            let system = SimilaritySystem::resolve(&common.system)?;
            let set = selfsimilar::disc_set(&system, n)?;
            let thetas = angles(theta, nodes)?;
            let measures = geometry::projection_scan(&set, &thetas);
            match common.format {
                Format::Csv => {
                    io::write_theta_scan(io::sink(common.out.as_deref())?, &thetas, &measures)
                }
                Format::Json => {
                    let unions: Vec<_> = thetas
                        .iter()
                        .map(|&t| geometry::project_set(&set, t))
                        .collect();
                    json(&common, &unions)
                }
            }
        }
        Command::Favard {
            common,
            n,
            nodes,
            full_range,
        } => {
            let system = SimilaritySystem::resolve(&common.system)?;
            let set = selfsimilar::disc_set(&system, n)?;
            let period = (!full_range).then(|| system.projection_period());
            let value = geometry::favard_quadrature(&set, nodes, period)?;
            let row = experiments::DecayRow {
                n,
                nodes,
                favard: value,
            };
            match common.format {
                Format::Csv => io::write_decay_rows(io::sink(common.out.as_deref())?, &[row]),
                Format::Json => json(&common, &row),
            }
        }
        Command::Buffon {
            common,
            n,
            samples,
            seed,
            halfwidth,
        } => {
            let system = SimilaritySystem::resolve(&common.system)?;
            let set = selfsimilar::disc_set(&system, n)?;
            let est = geometry::buffon_mc(&set, samples, seed, halfwidth)?;
            match common.format {
                Format::Csv => io::write_needle_rows(io::sink(common.out.as_deref())?, &[est]),
                Format::Json => json(&common, &est),
            }
        }
        Command::Multiplicity {
            common,
            n,
            theta,
            nodes,
            k,
        } => {
            let system = SimilaritySystem::resolve(&common.system)?;
            let set = selfsimilar::disc_set(&system, n)?;
            let thetas = angles(theta, nodes)?;
            if common.format == Format::Json {
                let reports = thetas
                    .iter()
                    .flat_map(|&t| k.iter().map(move |&kk| (t, kk)))
                    .map(|(t, kk)| multiplicity::estimate_chain_report(&set, t, kk, 2.0))
                    .collect::<Result<Vec<_>>>()?;
                return json(&common, &reports);
            }
            let mut rows = Vec::new();
            for &t in &thetas {
                let f = multiplicity::multiplicity_function(&set, t);
                let star = if n == 0 {
                    f.clone()
                } else {
                    multiplicity::maximal_function(&system, n, t)?
                };
                let l2 = f.lp_norm(2.0)?;
                let measure_l = f.support().measure();
                for &kk in &k {
                    let a_star = star.level_set(kk)?.measure();
                    rows.push(MultiplicityRow {
                        theta: t,
                        n,
                        k: kk,
                        measure_l,
                        measure_ak: f.level_set(kk)?.measure(),
                        l2norm: l2,
                        in_e: a_star <= kk.powi(-3),
                    });
                }
            }
            io::write_multiplicity_rows(io::sink(common.out.as_deref())?, &rows)
        }
        Command::ExceptScan {
            common,
            n,
            eps0,
            nodes,
        } => {
            let system = SimilaritySystem::resolve(&common.system)?;
            let scan = multiplicity::exceptional_set_scan(&system, n, eps0, nodes)?;
            match common.format {
                Format::Csv => io::write_exceptional_rows(io::sink(common.out.as_deref())?, &scan),
                Format::Json => json(&common, &scan),
            }
        }
        Command::FourierScan {
            common,
            theta,
            t,
            k_lo,
            k_hi,
            x_min,
            x_max,
            nodes,
            sample,
            n,
            eps0,
            steps,
        } => {
            if sample {
                let thetas: Vec<f64> = midpoints(0.0, PI / 3.0, 8).collect();
                let sel = fourier::select_sample_level(&thetas, n, eps0, steps)?;
                return json(&common, &sel);
            }
            let param = match t {
                Some(t) => Parameterization::T(t),
                None => Parameterization::Theta(theta),
            };
            let spec = ProductSpec::new(param, k_lo, k_hi)?;
            let (xs, values) = io::product_trace(&spec, x_min, x_max, nodes);
            match common.format {
                Format::Csv => {
                    io::write_product_trace(io::sink(common.out.as_deref())?, &xs, &values)
                }
                Format::Json => json(&common, &values),
            }
        }
        Command::Ssv {
            common,
            t,
            n,
            m,
            ell,
            alpha,
            depth,
        } => {
            let ell = ell.unwrap_or_else(|| (alpha * m as f64).round() as u32);
            match common.format {
                Format::Csv => {
                    let report = fourier::ssv_detect(t, n, m, ell, depth)?;
                    io::write_ssv_cells(io::sink(common.out.as_deref())?, &report)
                }
                Format::Json => {
                    let w = fourier::ssv_weighted_integral(t, n, m, ell, depth)?;
                    #[derive(Serialize)]
                    struct Summary {
                        t: f64,
                        interval: (f64, f64),
                        threshold: f64,
                        lower_measure: f64,
                        upper_measure: f64,
                        weighted_lower: f64,
                        weighted_upper: f64,
                        reference: f64,
                    }
                    json(
                        &common,
                        &Summary {
                            t,
                            interval: w.report.interval,
                            threshold: w.report.threshold,
                            lower_measure: w.report.lower_measure,
                            upper_measure: w.report.upper_measure,
                            weighted_lower: w.lower,
                            weighted_upper: w.upper,
                            reference: 3f64.powf(2.0 * m as f64 - ell as f64 / 2.0),
                        },
                    )
                }
            }
        }
        Command::Omega {
            common,
            m,
            ell,
            grid,
            a_grid,
        } => {
            let a = fourier::inequality_constant(a_grid)?;
            let grid = grid.unwrap_or_else(|| (8 * 3usize.pow(m + 1)).max(256));
            let scan = fourier::omega_scan(m, ell, grid, a.a)?;
            #[derive(Serialize)]
            struct Summary<'a> {
                inequality: fourier::InequalityConstant,
                scan: &'a fourier::OmegaScan,
            }
            json(
                &common,
                &Summary {
                    inequality: a,
                    scan: &scan,
                },
            )
        }
        Command::Salem {
            common,
            samples,
            k_max,
            seed,
            scale,
            layout,
        } => {
            let report = salem::ratio_experiment(samples, k_max, seed, scale, layout.into())?;
            json(&common, &report)
        }
        Command::Decay {
            common,
            config,
            n_min,
            n,
            nodes,
            model,
            seed,
            eps0,
            alpha,
        } => {
            let config = match config {
                Some(path) => ExperimentConfig::from_json(&std::fs::read_to_string(path)?)?,
                None => ExperimentConfig {
                    system: common.system.clone(),
                    n_min,
                    n_max: n,
                    nodes,
                    seed,
                    eps0,
                    alpha,
                    model,
                    output: common.out.clone(),
                    ..Default::default()
                },
            };
            let out = common.out.clone().or_else(|| config.output.clone());
            let system = SimilaritySystem::resolve(&config.system)?;
            let general = experiments::run_general(&system, &config)?;
            match common.format {
                Format::Csv => io::write_decay_rows(io::sink(out.as_deref())?, &general.rows),
                Format::Json => io::write_json(io::sink(out.as_deref())?, &general),
            }
        }
    }
}

/// Parses arguments, runs, and returns the process exit code.
pub fn main() -> i32 {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
