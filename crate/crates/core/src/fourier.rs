//! Fourier-side quantities for the gasket.
//!
//! The projected measure `ν_n` (uniform on the `3^n` projected centers) has
//! Fourier transform `ν̂_n(x) = ∏_{k=1}^{n} φ_θ(3^{-k} x)` with
//!
//! ```text
//! φ_θ(ξ) = (1/3) Σ_j exp(-i ξ cos(β_j − θ)),   β ∈ {π/2, −π/6, 7π/6}.
//! ```
//!
//! Up to a change of variable `3 φ_θ(ξ)` is `Φ(ξ, tξ)` with
//! `Φ(x, y) = 1 + e^{ix} + e^{iy}`. This module evaluates both
//! parameterisations, their partial products over factor ranges `k_lo..=k_hi`,
//! sample integrals of `|∏ φ_θ|^2`, certified brackets for the set of small
//! values of the high-frequency product, the planar zero-location scan and the
//! constant in `|Φ(x,y)|^2 ≥ a (|4cos²x − 1|^2 + |4cos²y − 1|^2)`.

use std::collections::HashSet;
use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::projected_centers;
use crate::numeric::pairwise_sum;
use crate::selfsimilar::{disc_count, disc_set, gasket_system, DEFAULT_BUDGET};

/// Directions `β_j` of the gasket maps.
pub const GASKET_ANGLES: [f64; 3] = [PI / 2.0, -PI / 6.0, 7.0 * PI / 6.0];

/// Above this many factors products are accumulated as log-magnitude and
/// phase.
pub const LOG_ACCUMULATION_FACTORS: usize = 40;

/// Upper bound on cells or grid points a single scan may allocate.
pub const SCAN_BUDGET: usize = 50_000_000;

fn pow3(k: i32) -> f64 {
    3f64.powi(k)
}

pub fn phi_theta(theta: f64, xi: f64) -> Complex64 {
    GASKET_ANGLES
        .iter()
        .map(|&b| Complex64::from_polar(1.0, -xi * (b - theta).cos()))
        .sum::<Complex64>()
        / 3.0
}

/// `ν̂_n(x) = ∏_{k=1}^{n} φ_θ(3^{-k} x)`.
pub fn nu_hat(n: usize, theta: f64, x: f64) -> Result<Complex64> {
    if n == 0 {
        return Err(Error::Precondition("ν̂_n needs n >= 1".into()));
    }
    let spec = ProductSpec::new(Parameterization::Theta(theta), 1, n as i32)?;
    Ok(product_eval(&spec, x).value)
}

/// `3^{-n} Σ_α exp(-i x p_α)` summed over all projected level-`n` gasket
/// centers.
pub fn nu_hat_direct(n: usize, theta: f64, x: f64) -> Result<Complex64> {
    if n == 0 {
        return Err(Error::Precondition("ν̂_n needs n >= 1".into()));
    }
    let gasket = gasket_system();
    let requested = disc_count(&gasket, n);
    if requested > DEFAULT_BUDGET as u128 {
        return Err(Error::Budget {
            requested,
            budget: DEFAULT_BUDGET,
        });
    }
    let set = disc_set(&gasket, n)?;
    let p = projected_centers(&set, theta);
    let re: Vec<f64> = p.iter().map(|q| (x * q).cos()).collect();
    let im: Vec<f64> = p.iter().map(|q| -(x * q).sin()).collect();
    let scale = p.len() as f64;
    Ok(Complex64::new(
        pairwise_sum(&re) / scale,
        pairwise_sum(&im) / scale,
    ))
}

/// `Φ(x, y) = 1 + e^{ix} + e^{iy}`.
pub fn big_phi(x: f64, y: f64) -> Complex64 {
    Complex64::new(1.0, 0.0) + Complex64::from_polar(1.0, x) + Complex64::from_polar(1.0, y)
}

/// `φ_t(x) = Φ(x, t x)`.
pub fn phi_t(t: f64, x: f64) -> Complex64 {
    big_phi(x, t * x)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Parameterization {
    /// Factors `φ_θ(3^{-k} x)`.
    Theta(f64),
    /// Factors `(1/3) Φ(3^{-k} x, t 3^{-k} x)`.
    T(f64),
}

/// A product of consecutive factors `k_lo..=k_hi` at scale base 3.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ProductSpec {
    pub parameterization: Parameterization,
    pub k_lo: i32,
    pub k_hi: i32,
}

impl ProductSpec {
    pub fn new(parameterization: Parameterization, k_lo: i32, k_hi: i32) -> Result<Self> {
        if k_lo > k_hi {
            return Err(Error::Precondition(format!(
                "empty factor range {k_lo}..={k_hi}"
            )));
        }
        Ok(Self {
            parameterization,
            k_lo,
            k_hi,
        })
    }

    pub fn factor_count(&self) -> usize {
        (self.k_hi - self.k_lo + 1) as usize
    }

    pub fn factor(&self, k: i32, x: f64) -> Complex64 {
        let xi = x * pow3(-k);
        match self.parameterization {
            Parameterization::Theta(theta) => phi_theta(theta, xi),
            Parameterization::T(t) => phi_t(t, xi) / 3.0,
        }
    }

    /// Lipschitz constant of factor `k` in `x`.
    ///
    /// For the `t` form `|d/dx (1/3)Φ(3^{-k}x, t3^{-k}x)| ≤ 3^{-k}(1 + |t|)/3`;
    /// for the `θ` form each exponent has slope at most `3^{-k}`.
    pub fn factor_lipschitz(&self, k: i32) -> f64 {
        match self.parameterization {
            Parameterization::Theta(_) => pow3(-k),
            Parameterization::T(t) => pow3(-k) * (1.0 + t.abs()) / 3.0,
        }
    }

    /// Lipschitz constant of the whole product. Every factor has modulus at
    /// most 1, so the product rule gives the sum of the factor constants.
    pub fn lipschitz(&self) -> f64 {
        (self.k_lo..=self.k_hi)
            .map(|k| self.factor_lipschitz(k))
            .sum()
    }

    /// `|P(x)|^2`, without the phase.
    pub fn modulus_squared(&self, x: f64) -> f64 {
        (self.k_lo..=self.k_hi)
            .map(|k| self.factor(k, x).norm_sqr())
            .product()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ProductValue {
    pub value: Complex64,
    /// `Σ log|factor|`; `-∞` when some factor is exactly zero.
    pub log_magnitude: f64,
}

pub fn product_eval(spec: &ProductSpec, x: f64) -> ProductValue {
    let mut log_magnitude = 0.0;
    let mut phase = 0.0;
    let mut direct = Complex64::new(1.0, 0.0);
    let long = spec.factor_count() > LOG_ACCUMULATION_FACTORS;
    for k in spec.k_lo..=spec.k_hi {
        let f = spec.factor(k, x);
        let modulus = f.norm();
        if modulus == 0.0 {
            return ProductValue {
                value: Complex64::new(0.0, 0.0),
                log_magnitude: f64::NEG_INFINITY,
            };
        }
        log_magnitude += modulus.ln();
        if long {
            phase += f.arg();
        } else {
            direct *= f;
        }
    }
    let value = if long {
        Complex64::from_polar(log_magnitude.exp(), phase)
    } else {
        direct
    };
    ProductValue {
        value,
        log_magnitude,
    }
}

// Composite Simpson rule on an even number of panels covering [lo, hi] with
// panel width at most `max_step`.
fn simpson<F>(lo: f64, hi: f64, max_step: f64, f: F) -> f64
where
    F: Fn(f64) -> f64 + Sync,
{
    if !(hi > lo) {
        return 0.0;
    }
    let mut panels = ((hi - lo) / max_step).ceil() as usize;
    panels = panels.max(2);
    panels += panels % 2;
    let h = (hi - lo) / panels as f64;
    let terms: Vec<f64> = (0..=panels)
        .into_par_iter()
        .map(|i| {
            let w = if i == 0 || i == panels {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            w * f(lo + i as f64 * h)
        })
        .collect();
    pairwise_sum(&terms) * h / 3.0
}

/// The sample interval `I = [3^{n-m}, 3^n]`.
pub fn sample_interval(n: usize, m: usize) -> (f64, f64) {
    (pow3((n - m) as i32), pow3(n as i32))
}

/// `∫_I ∏_{k=0}^{n} |φ_θ(3^{-k} x)|^2 dx` over `I = [3^{n-m}, 3^n]`.
///
/// The fastest factor (`k = 0`) oscillates on unit scale; the step is at most
/// `2π / steps_per_period`.
pub fn sample_integral(theta: f64, n: usize, m: usize, steps_per_period: usize) -> Result<f64> {
    if m > n {
        return Err(Error::Precondition(format!("m = {m} exceeds n = {n}")));
    }
    if steps_per_period < 4 {
        return Err(Error::Precondition(
            "at least 4 steps per period are required".into(),
        ));
    }
    let (lo, hi) = sample_interval(n, m);
    let panels = (hi - lo) * steps_per_period as f64 / (2.0 * PI);
    if panels > SCAN_BUDGET as f64 {
        return Err(Error::Budget {
            requested: panels as u128,
            budget: SCAN_BUDGET,
        });
    }
    let spec = ProductSpec::new(Parameterization::Theta(theta), 0, n as i32)?;
    Ok(simpson(lo, hi, 2.0 * PI / steps_per_period as f64, |x| {
        spec.modulus_squared(x)
    }))
}

/// `m = max(1, round(2 ε₀ log₃ N))`.
pub fn sample_depth(levels: usize, eps0: f64) -> usize {
    let m = (2.0 * eps0 * (levels as f64).ln() / 3f64.ln()).round();
    (m as usize).max(1)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampleSelection {
    pub levels: usize,
    pub eps0: f64,
    pub m: usize,
    pub k_threshold: f64,
    pub thetas: Vec<f64>,
    /// `(n, mean over θ of the sample integral)` for every admissible `n`.
    pub candidates: Vec<(usize, f64)>,
    pub chosen_n: usize,
    pub chosen_integrals: Vec<f64>,
    /// Angles whose sample integral is at most twice the mean; by Markov's
    /// inequality they are more than half of the grid.
    pub tilde_e: Vec<f64>,
    /// `2 ε₀ N^{ε₀-1} log N`.
    pub scaling: f64,
}

/// Chooses `n ∈ (N/4, N/2)` minimising the θ-average of the sample integral.
pub fn select_sample_level(
    thetas: &[f64],
    levels: usize,
    eps0: f64,
    steps_per_period: usize,
) -> Result<SampleSelection> {
    if thetas.is_empty() {
        return Err(Error::Precondition("no angles given".into()));
    }
    let m = sample_depth(levels, eps0);
    let admissible: Vec<usize> = (1..levels)
        .filter(|&n| 4 * n > levels && 2 * n < levels && n >= m)
        .collect();
    if admissible.is_empty() {
        return Err(Error::Precondition(format!(
            "no level n with N/4 < n < N/2 and n >= m = {m} for N = {levels}"
        )));
    }
    let mut candidates = Vec::new();
    let mut best: Option<(usize, f64, Vec<f64>)> = None;
    for &n in &admissible {
        let values: Vec<f64> = thetas
            .iter()
            .map(|&t| sample_integral(t, n, m, steps_per_period))
            .collect::<Result<_>>()?;
        let mean = pairwise_sum(&values) / values.len() as f64;
        candidates.push((n, mean));
        if best.as_ref().is_none_or(|b| mean < b.1) {
            best = Some((n, mean, values));
        }
    }
    let (chosen_n, mean, chosen_integrals) = best.expect("at least one candidate");
    let tilde_e = thetas
        .iter()
        .zip(&chosen_integrals)
        .filter(|(_, &v)| v <= 2.0 * mean)
        .map(|(&t, _)| t)
        .collect();
    let big_n = levels as f64;
    Ok(SampleSelection {
        levels,
        eps0,
        m,
        k_threshold: big_n.powf(eps0),
        thetas: thetas.to_vec(),
        candidates,
        chosen_n,
        chosen_integrals,
        tilde_e,
        scaling: 2.0 * eps0 * big_n.powf(eps0 - 1.0) * big_n.ln(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CellStatus {
    Inside,
    Outside,
    Boundary,
}

impl CellStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            CellStatus::Inside => "inside",
            CellStatus::Outside => "outside",
            CellStatus::Boundary => "boundary",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SsvCell {
    pub lo: f64,
    pub hi: f64,
    pub status: CellStatus,
}

/// Certified bracket for `|SSV(t)| = |{x ∈ I : |P_{2,t}(x)| ≤ 3^{-ℓ}}|`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SsvReport {
    pub t: f64,
    pub n: usize,
    pub m: usize,
    pub ell: u32,
    pub refine_depth: u32,
    pub interval: (f64, f64),
    pub threshold: f64,
    pub cell_width: f64,
    /// Lipschitz constant of `P_{2,t}` used for classification.
    pub lipschitz: f64,
    pub lower_measure: f64,
    pub upper_measure: f64,
    pub cells: Vec<SsvCell>,
}

/// `P_{2,t} = ∏_{k=n-m}^{n} (1/3) Φ(3^{-k}x, t 3^{-k}x)`.
pub fn p2_spec(t: f64, n: usize, m: usize) -> Result<ProductSpec> {
    ProductSpec::new(Parameterization::T(t), (n - m) as i32, n as i32)
}

/// `P_{1,t} = ∏_{k=0}^{n-m} (1/3) Φ(3^{-k}x, t 3^{-k}x)`.
pub fn p1_spec(t: f64, n: usize, m: usize) -> Result<ProductSpec> {
    ProductSpec::new(Parameterization::T(t), 0, (n - m) as i32)
}

/// Brackets the set of small values of `P_{2,t}` on `I = [3^{n-m}, 3^n]`.
///
/// `I` is tiled by cells of width `3^{n-m-refine_depth}`. On a cell with
/// midpoint `c` and half-width `r`, `|P_2|` lies within `L r` of `|P_2(c)|`
/// and never exceeds 1. Cells whose whole range is at most `3^{-ℓ}` are
/// inside, cells whose whole range exceeds it are outside, the rest are
/// boundary cells. The lower measure counts inside cells, the upper measure
/// inside and boundary cells. Refining by one level splits every cell in
/// three, and a certified classification survives the split, so the bracket
/// can only shrink.
pub fn ssv_detect(t: f64, n: usize, m: usize, ell: u32, refine_depth: u32) -> Result<SsvReport> {
    if m == 0 || m > n {
        return Err(Error::Precondition(format!(
            "need 1 <= m <= n, got m = {m}, n = {n}"
        )));
    }
    let cell_count = (3u128.pow(m as u32) - 1) * 3u128.pow(refine_depth);
    if cell_count > SCAN_BUDGET as u128 {
        return Err(Error::Budget {
            requested: cell_count,
            budget: SCAN_BUDGET,
        });
    }
    let cell_count = cell_count as usize;
    let spec = p2_spec(t, n, m)?;
    let (lo, hi) = sample_interval(n, m);
    let width = pow3((n - m) as i32 - refine_depth as i32);
    let threshold = pow3(-(ell as i32));
    let lipschitz = spec.lipschitz();
    let slack = 0.5 * width * lipschitz;
    let cells: Vec<SsvCell> = (0..cell_count)
        .into_par_iter()
        .map(|i| {
            let a = lo + i as f64 * width;
            let b = if i + 1 == cell_count {
                hi
            } else {
                lo + (i + 1) as f64 * width
            };
            let centre = product_eval(&spec, 0.5 * (a + b)).value.norm();
            let upper = (centre + slack).min(1.0);
            let lower = (centre - slack).max(0.0);
            let status = if upper <= threshold {
                CellStatus::Inside
            } else if lower > threshold {
                CellStatus::Outside
            } else {
                CellStatus::Boundary
            };
            SsvCell {
                lo: a,
                hi: b,
                status,
            }
        })
        .collect();
    let inside: Vec<f64> = cells
        .iter()
        .filter(|c| c.status == CellStatus::Inside)
        .map(|c| c.hi - c.lo)
        .collect();
    let boundary: Vec<f64> = cells
        .iter()
        .filter(|c| c.status == CellStatus::Boundary)
        .map(|c| c.hi - c.lo)
        .collect();
    let lower_measure = pairwise_sum(&inside);
    Ok(SsvReport {
        t,
        n,
        m,
        ell,
        refine_depth,
        interval: (lo, hi),
        threshold,
        cell_width: width,
        lipschitz,
        lower_measure,
        upper_measure: lower_measure + pairwise_sum(&boundary),
        cells,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeightedSsv {
    pub report: SsvReport,
    /// `∫ |P_{1,t}|^2` over inside cells.
    pub lower: f64,
    /// `∫ |P_{1,t}|^2` over inside and boundary cells.
    pub upper: f64,
}

fn p1_step(t: f64) -> f64 {
    2.0 * PI / (32.0 * (1.0 + t.abs()))
}

/// `∫_{SSV(t)} |P_{1,t}(x)|^2 dx`, bracketed by the cell classification of
/// [`ssv_detect`].
pub fn ssv_weighted_integral(
    t: f64,
    n: usize,
    m: usize,
    ell: u32,
    refine_depth: u32,
) -> Result<WeightedSsv> {
    let report = ssv_detect(t, n, m, ell, refine_depth)?;
    let p1 = p1_spec(t, n, m)?;
    let step = p1_step(t);
    let per_cell: Vec<(CellStatus, f64)> = report
        .cells
        .par_iter()
        .filter(|c| c.status != CellStatus::Outside)
        .map(|c| {
            (
                c.status,
                simpson_serial(c.lo, c.hi, step, |x| p1.modulus_squared(x)),
            )
        })
        .collect();
    let inside: Vec<f64> = per_cell
        .iter()
        .filter(|c| c.0 == CellStatus::Inside)
        .map(|c| c.1)
        .collect();
    let boundary: Vec<f64> = per_cell
        .iter()
        .filter(|c| c.0 == CellStatus::Boundary)
        .map(|c| c.1)
        .collect();
    let lower = pairwise_sum(&inside);
    Ok(WeightedSsv {
        report,
        lower,
        upper: lower + pairwise_sum(&boundary),
    })
}

fn simpson_serial<F: Fn(f64) -> f64>(lo: f64, hi: f64, max_step: f64, f: F) -> f64 {
    let mut panels = (((hi - lo) / max_step).ceil() as usize).max(2);
    panels += panels % 2;
    let h = (hi - lo) / panels as f64;
    let mut sum = f(lo) + f(hi);
    for i in 1..panels {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(lo + i as f64 * h);
    }
    sum * h / 3.0
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SsvDoubleIntegral {
    pub n: usize,
    pub m: usize,
    pub ell: u32,
    /// `(t, lower, upper)` per grid point.
    pub per_t: Vec<(f64, f64, f64)>,
    pub lower: f64,
    pub upper: f64,
    /// `3^{2m - ℓ/2}`.
    pub reference: f64,
    pub upper_ratio: f64,
}

/// Midpoint rule in `t` over `[t_lo, t_hi]` of [`ssv_weighted_integral`].
pub fn ssv_double_integral(
    t_range: (f64, f64),
    t_count: usize,
    n: usize,
    m: usize,
    ell: u32,
    refine_depth: u32,
) -> Result<SsvDoubleIntegral> {
    if t_count == 0 || !(t_range.1 > t_range.0) {
        return Err(Error::Precondition("empty t grid".into()));
    }
    let dt = (t_range.1 - t_range.0) / t_count as f64;
    let per_t: Vec<(f64, f64, f64)> = crate::numeric::midpoints(t_range.0, t_range.1, t_count)
        .map(|t| ssv_weighted_integral(t, n, m, ell, refine_depth).map(|w| (t, w.lower, w.upper)))
        .collect::<Result<_>>()?;
    let lows: Vec<f64> = per_t.iter().map(|p| p.1).collect();
    let highs: Vec<f64> = per_t.iter().map(|p| p.2).collect();
    let reference = 3f64.powf(2.0 * m as f64 - ell as f64 / 2.0);
    let upper = pairwise_sum(&highs) * dt;
    Ok(SsvDoubleIntegral {
        n,
        m,
        ell,
        per_t,
        lower: pairwise_sum(&lows) * dt,
        upper,
        reference,
        upper_ratio: upper / reference,
    })
}

/// `|4cos²x − 1|^2`, which equals `(sin 3x / sin x)^2`.
pub fn sine_ratio_squared(x: f64) -> f64 {
    let c = x.cos();
    (4.0 * c * c - 1.0).powi(2)
}

/// `|Φ(x,y)|^2 / (|4cos²x − 1|^2 + |4cos²y − 1|^2)`, or `None` where the
/// denominator vanishes.
pub fn key_ratio(x: f64, y: f64) -> Option<f64> {
    let rhs = sine_ratio_squared(x) + sine_ratio_squared(y);
    (rhs > 0.0).then(|| big_phi(x, y).norm_sqr() / rhs)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct InequalityConstant {
    pub a: f64,
    pub argmin: (f64, f64),
    pub grid: usize,
}

/// Minimum of [`key_ratio`] over the `grid × grid` lattice of `[0, 2π)^2`.
/// Points with zero right-hand side are skipped.
pub fn inequality_constant(grid: usize) -> Result<InequalityConstant> {
    if grid < 1024 {
        return Err(Error::Precondition(format!(
            "grid step 2π/{grid} is coarser than 2π/1024"
        )));
    }
    if grid.saturating_mul(grid) > SCAN_BUDGET * 4 {
        return Err(Error::Budget {
            requested: (grid as u128) * (grid as u128),
            budget: SCAN_BUDGET * 4,
        });
    }
    let h = 2.0 * PI / grid as f64;
    let rows: Vec<(f64, (f64, f64))> = (0..grid)
        .into_par_iter()
        .map(|i| {
            let x = i as f64 * h;
            let mut best = (f64::INFINITY, (x, 0.0));
            for j in 0..grid {
                let y = j as f64 * h;
                if let Some(r) = key_ratio(x, y) {
                    if r < best.0 {
                        best = (r, (x, y));
                    }
                }
            }
            best
        })
        .collect();
    let (a, argmin) = rows
        .into_iter()
        .fold((f64::INFINITY, (0.0, 0.0)), |acc, r| {
            if r.0 < acc.0 {
                r
            } else {
                acc
            }
        });
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::Invariant(format!(
            "inequality constant {a} is not positive"
        )));
    }
    Ok(InequalityConstant { a, argmin, grid })
}

/// `|∏_{k=0}^{m} (4cos²(3^k x) − 1) − sin(3^{m+1} x) / sin x|`.
pub fn telescoping_check(x: f64, m: u32) -> Result<f64> {
    for k in 0..=m {
        if (pow3(k as i32) * x).sin().abs() <= 1e-8 {
            return Err(Error::Precondition(format!(
                "sin(3^{k} x) vanishes to 1e-8 at x = {x}"
            )));
        }
    }
    let product: f64 = (0..=m)
        .map(|k| {
            let c = (pow3(k as i32) * x).cos();
            4.0 * c * c - 1.0
        })
        .product();
    Ok((product - (pow3(m as i32 + 1) * x).sin() / x.sin()).abs())
}

/// `|𝒫(x,y)| = ∏_{k=0}^{m} |Φ(3^k x, 3^k y)|`.
pub fn planar_product_modulus(m: u32, x: f64, y: f64) -> f64 {
    (0..=m)
        .map(|k| {
            let s = pow3(k as i32);
            big_phi(s * x, s * y).norm()
        })
        .product()
}

/// Whether `(x, y)` lies in `Ω = {|𝒫| ≤ 3^{m-ℓ}}`.
pub fn omega_contains(m: u32, ell: u32, x: f64, y: f64) -> bool {
    planar_product_modulus(m, x, y) <= pow3(m as i32 - ell as i32)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OmegaScan {
    pub m: u32,
    pub ell: u32,
    pub grid: usize,
    pub step: f64,
    pub a_empirical: f64,
    #[serde(skip)]
    pub omega_points: Vec<(f64, f64)>,
    pub omega_count: usize,
    /// `2 a^{-(m+1)} 3^{2(m-ℓ)}`.
    pub containment_bound: f64,
    #[serde(skip)]
    pub containment_violations: Vec<(f64, f64)>,
    pub containment_violation_count: usize,
    /// Grid points where some factor breaks `|Φ|^2 ≥ a (A + B)`.
    pub key_inequality_violations: usize,
    /// Grid points where `∏(A_k + B_k) < max(∏A_k, ∏B_k)`.
    pub splitting_violations: usize,
    /// Distinct lattice nodes `(iπ, jπ)/3^{m+1}` nearest to an Ω point.
    pub touched_squares: usize,
    /// `4 · 3^{2m+2}`.
    pub square_count: usize,
    /// Largest sup-distance from an Ω point to its lattice node.
    pub max_node_distance: f64,
    /// `3^{-m-ℓ/2}`.
    pub square_side: f64,
}

/// Scans `Ω` on the `grid × grid` lattice of `[0, 2π)^2` and checks, at every
/// point, the chain that places `Ω` inside the sine-square set:
///
/// ```text
/// |𝒫|^2 ≥ a^{m+1} ∏ (A_k + B_k) ≥ a^{m+1} max(∏A_k, ∏B_k)
///       = a^{m+1} max(sin²(3^{m+1}x)/sin²x, …) ≥ a^{m+1} max(sin²(3^{m+1}x), sin²(3^{m+1}y))
/// ```
///
/// with `A_k = |4cos²(3^k x) − 1|^2` and `B_k` likewise in `y`.
pub fn omega_scan(m: u32, ell: u32, grid: usize, a_empirical: f64) -> Result<OmegaScan> {
    let lattice = 3usize.pow(m + 1);
    if grid < 8 * lattice {
        return Err(Error::Precondition(format!(
            "grid 2π/{grid} does not resolve sin(3^{} x); need at least {}",
            m + 1,
            8 * lattice
        )));
    }
    if grid.saturating_mul(grid) > SCAN_BUDGET {
        return Err(Error::Budget {
            requested: (grid as u128) * (grid as u128),
            budget: SCAN_BUDGET,
        });
    }
    if !(a_empirical > 0.0) {
        return Err(Error::Precondition("a_empirical must be positive".into()));
    }
    let h = 2.0 * PI / grid as f64;
    let threshold = pow3(m as i32 - ell as i32);
    let containment_bound =
        2.0 * a_empirical.powi(-(m as i32 + 1)) * pow3(2 * (m as i32 - ell as i32));
    let top = pow3(m as i32 + 1);
    let nodes = 2 * lattice;
    let node_step = PI / top;

    struct RowResult {
        omega: Vec<(f64, f64)>,
        violations: Vec<(f64, f64)>,
        key: usize,
        split: usize,
    }

    let rows: Vec<RowResult> = (0..grid)
        .into_par_iter()
        .map(|i| {
            let x = i as f64 * h;
            let mut row = RowResult {
                omega: Vec::new(),
                violations: Vec::new(),
                key: 0,
                split: 0,
            };
            for j in 0..grid {
                let y = j as f64 * h;
                let mut modulus = 1.0;
                let mut prod_sum = 1.0;
                let mut prod_a = 1.0;
                let mut prod_b = 1.0;
                for k in 0..=m {
                    let s = pow3(k as i32);
                    let (u, v) = (s * x, s * y);
                    let phi2 = big_phi(u, v).norm_sqr();
                    let (ak, bk) = (sine_ratio_squared(u), sine_ratio_squared(v));
                    if phi2 < a_empirical * (ak + bk) * (1.0 - 1e-12) {
                        row.key += 1;
                    }
                    modulus *= phi2.sqrt();
                    prod_sum *= ak + bk;
                    prod_a *= ak;
                    prod_b *= bk;
                }
                if prod_sum < prod_a.max(prod_b) * (1.0 - 1e-12) {
                    row.split += 1;
                }
                if modulus <= threshold {
                    row.omega.push((x, y));
                    let lhs = (top * x).sin().powi(2) + (top * y).sin().powi(2);
                    if lhs > containment_bound {
                        row.violations.push((x, y));
                    }
                }
            }
            row
        })
        .collect();

    let mut omega_points = Vec::new();
    let mut containment_violations = Vec::new();
    let mut key_inequality_violations = 0;
    let mut splitting_violations = 0;
    for row in rows {
        omega_points.extend(row.omega);
        containment_violations.extend(row.violations);
        key_inequality_violations += row.key;
        splitting_violations += row.split;
    }

    let mut touched = HashSet::new();
    let mut max_node_distance: f64 = 0.0;
    for &(x, y) in &omega_points {
        let ix = (x / node_step).round();
        let iy = (y / node_step).round();
        let d = (x - ix * node_step).abs().max((y - iy * node_step).abs());
        max_node_distance = max_node_distance.max(d);
        touched.insert((ix as usize % nodes, iy as usize % nodes));
    }

    Ok(OmegaScan {
        m,
        ell,
        grid,
        step: h,
        a_empirical,
        omega_count: omega_points.len(),
        omega_points,
        containment_bound,
        containment_violation_count: containment_violations.len(),
        containment_violations,
        key_inequality_violations,
        splitting_violations,
        touched_squares: touched.len(),
        square_count: 4 * 3usize.pow(2 * m + 2),
        max_node_distance,
        square_side: 3f64.powf(-(m as f64) - ell as f64 / 2.0),
    })
}
