//! The projection multiplicity function and the quantities built on it.
//!
//! For a level-`n` disc set and a direction `θ`, the multiplicity function is
//!
//! ```text
//! f_{n,θ}(x) = w · #{α : |x − p_α| ≤ ρ^n},     w = 1 / (2 (kρ)^n),
//! ```
//!
//! where `p_α` are the projected centers. It is the box mollification of the
//! uniform atomic measure on the `p_α`, so `∫ f = 1`. For the gasket `w = 1/2`
//! and every value is an exact half-integer.
//!
//! The projection `ℒ` is taken to be the support `{f > 0}`, i.e. the level set
//! at the coverage weight `w`, not the level set at `1`.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{projected_centers, IntervalUnion};
use crate::numeric::{midpoints, pairwise_sum};
use crate::selfsimilar::{disc_count, disc_set, DiscSet, SimilaritySystem, DEFAULT_BUDGET};

/// Tolerance used when asserting the provable inequalities.
pub const INEQUALITY_TOL: f64 = 1e-9;

/// A nonnegative piecewise-constant function with compact support.
///
/// `values[i]` is the value on `(breakpoints[i], breakpoints[i + 1])`; the
/// function vanishes outside `[breakpoints[0], breakpoints[M]]`. Adjacent pieces
/// never share a value.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct StepFunction {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
}

impl StepFunction {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn new(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if breakpoints.is_empty() && values.is_empty() {
            return Ok(Self::zero());
        }
        if breakpoints.len() != values.len() + 1 {
            return Err(Error::Precondition(format!(
                "{} breakpoints cannot carry {} values",
                breakpoints.len(),
                values.len()
            )));
        }
        if breakpoints.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::Precondition(
                "breakpoints must be strictly increasing".into(),
            ));
        }
        if values.iter().any(|v| !(*v >= 0.0)) {
            return Err(Error::Precondition("values must be nonnegative".into()));
        }
        Ok(Self::from_pieces(
            breakpoints
                .windows(2)
                .zip(values)
                .map(|(w, v)| (w[0], w[1], v)),
        ))
    }

    // Pieces must be sorted and non-overlapping. Zero-width pieces are dropped,
    // equal neighbours merged and zero values trimmed at both ends.
    fn from_pieces<I>(pieces: I) -> Self
    where
        I: IntoIterator<Item = (f64, f64, f64)>,
    {
        let mut breakpoints: Vec<f64> = Vec::new();
        let mut values: Vec<f64> = Vec::new();
        for (a, b, v) in pieces {
            if !(a < b) {
                continue;
            }
            if values.is_empty() {
                if v == 0.0 {
                    continue;
                }
                breakpoints.push(a);
                breakpoints.push(b);
                values.push(v);
                continue;
            }
            let last = *breakpoints.last().unwrap();
            if a > last {
                // gap between pieces
                if *values.last().unwrap() == 0.0 {
                    *breakpoints.last_mut().unwrap() = a;
                } else {
                    breakpoints.push(a);
                    values.push(0.0);
                }
            }
            if *values.last().unwrap() == v {
                *breakpoints.last_mut().unwrap() = b;
            } else {
                breakpoints.push(b);
                values.push(v);
            }
        }
        while values.last() == Some(&0.0) {
            values.pop();
            breakpoints.pop();
        }
        if values.is_empty() {
            breakpoints.clear();
        }
        StepFunction {
            breakpoints,
            values,
        }
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `(left, right, value)` for every piece.
    pub fn pieces(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.breakpoints
            .windows(2)
            .zip(&self.values)
            .map(|(w, &v)| (w[0], w[1], v))
    }

    pub fn piece_count(&self) -> usize {
        self.values.len()
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    /// Value at `x`. At a breakpoint the larger of the two adjacent values is
    /// returned, matching the closed-disc convention.
    pub fn value_at(&self, x: f64) -> f64 {
        let i = self.breakpoints.partition_point(|&b| b < x);
        let left = if i > 0 {
            self.values.get(i - 1).copied()
        } else {
            None
        };
        if self.breakpoints.get(i) == Some(&x) {
            let right = self.values.get(i).copied();
            return left.unwrap_or(0.0).max(right.unwrap_or(0.0));
        }
        left.unwrap_or(0.0)
    }

    pub fn integral(&self) -> f64 {
        let terms: Vec<f64> = self.pieces().map(|(a, b, v)| v * (b - a)).collect();
        pairwise_sum(&terms)
    }

    pub fn lp_norm(&self, p: f64) -> Result<f64> {
        lp_norm(self, p)
    }

    pub fn level_set(&self, k: f64) -> Result<IntervalUnion> {
        level_set(self, k)
    }

    /// `{f > 0}`.
    pub fn support(&self) -> IntervalUnion {
        IntervalUnion::from_intervals(self.pieces().filter(|p| p.2 > 0.0).map(|p| (p.0, p.1)))
    }

    /// Pointwise maximum over the merged breakpoint grid.
    pub fn pointwise_max(&self, other: &StepFunction) -> StepFunction {
        let mut grid: Vec<f64> = self
            .breakpoints
            .iter()
            .chain(&other.breakpoints)
            .copied()
            .collect();
        grid.sort_unstable_by(f64::total_cmp);
        grid.dedup();
        let mut a = PieceCursor::new(self);
        let mut b = PieceCursor::new(other);
        StepFunction::from_pieces(grid.windows(2).map(|w| {
            let mid = 0.5 * (w[0] + w[1]);
            (w[0], w[1], a.value_at(mid).max(b.value_at(mid)))
        }))
    }
}

// Evaluates a step function at increasing abscissae in amortised O(1).
struct PieceCursor<'a> {
    f: &'a StepFunction,
    next: usize,
}

impl<'a> PieceCursor<'a> {
    fn new(f: &'a StepFunction) -> Self {
        Self { f, next: 0 }
    }

    fn value_at(&mut self, x: f64) -> f64 {
        let bp = &self.f.breakpoints;
        while self.next < bp.len() && bp[self.next] <= x {
            self.next += 1;
        }
        if self.next == 0 || self.next == bp.len() {
            0.0
        } else {
            self.f.values[self.next - 1]
        }
    }
}

/// Exact multiplicity function of a disc set in direction `theta`.
///
/// The `2N` interval endpoints are swept in order; at equal coordinates
/// openings are processed before closings, so touching intervals overlap at
/// the shared point (a zero-width piece, then discarded).
pub fn multiplicity_function(set: &DiscSet, theta: f64) -> StepFunction {
    if set.is_empty() {
        return StepFunction::zero();
    }
    let r = set.radius();
    let weight = set.coverage_weight();
    let p = projected_centers(set, theta);
    let (mut i, mut j) = (0usize, 0usize);
    let n = p.len();
    let mut count: u64 = 0;
    let mut last = p[0] - r;
    let mut pieces = Vec::with_capacity(2 * n);
    while j < n {
        let open = if i < n { p[i] - r } else { f64::INFINITY };
        let close = p[j] + r;
        let (x, opening) = if open <= close {
            (open, true)
        } else {
            (close, false)
        };
        if x > last {
            pieces.push((last, x, count as f64 * weight));
            last = x;
        }
        if opening {
            count += 1;
            i += 1;
        } else {
            count -= 1;
            j += 1;
        }
    }
    StepFunction::from_pieces(pieces)
}

/// `(Σ v_i^p Δ_i)^{1/p}`; `p = ∞` gives the maximum value.
pub fn lp_norm(f: &StepFunction, p: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::Domain(format!("L^p norm needs p >= 1, got {p}")));
    }
    if p.is_infinite() {
        return Ok(f.max_value());
    }
    let terms: Vec<f64> = f.pieces().map(|(a, b, v)| v.powf(p) * (b - a)).collect();
    Ok(pairwise_sum(&terms).powf(1.0 / p))
}

/// `A_K = {x : f(x) ≥ K}`.
pub fn level_set(f: &StepFunction, k: f64) -> Result<IntervalUnion> {
    if !(k > 0.0) {
        return Err(Error::Domain(format!("level K must be positive, got {k}")));
    }
    Ok(IntervalUnion::from_intervals(
        f.pieces().filter(|p| p.2 >= k).map(|p| (p.0, p.1)),
    ))
}

/// `f*_{N,θ} = max_{1 ≤ n ≤ N} f_{n,θ}`.
pub fn maximal_function(
    system: &SimilaritySystem,
    levels: usize,
    theta: f64,
) -> Result<StepFunction> {
    if levels == 0 {
        return Err(Error::Precondition(
            "the maximal function needs N >= 1".into(),
        ));
    }
    let mut best = StepFunction::zero();
    for n in 1..=levels {
        let set = disc_set(system, n)?;
        best = best.pointwise_max(&multiplicity_function(&set, theta));
    }
    Ok(best)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExceptionalScan {
    pub levels: usize,
    /// `None` when the threshold was given directly.
    pub eps0: Option<f64>,
    pub k_threshold: f64,
    /// Angles are midpoints of `grid_size` cells of `[0, scan_period)`.
    pub scan_period: f64,
    pub theta_grid: Vec<f64>,
    pub a_star_measures: Vec<f64>,
    pub in_e: Vec<bool>,
    /// `(grid spacing) · #{θ ∈ E}` over the scanned range.
    pub e_measure_estimate: f64,
    /// The estimate carried to `[0, π)` by the projection period.
    pub e_measure_full: f64,
    /// `N^{-ε₀}` when `ε₀` was given.
    pub bound: Option<f64>,
    pub satisfies_bound: Option<bool>,
}

/// Scans `E_N = {θ : |A*_{K,N,θ}| ≤ K^{-3}}` with `K = N^{ε₀}`.
pub fn exceptional_set_scan(
    system: &SimilaritySystem,
    levels: usize,
    eps0: f64,
    grid_size: usize,
) -> Result<ExceptionalScan> {
    if !(eps0 > 0.0 && eps0 < 1.0 / 11.0) {
        return Err(Error::Precondition(format!(
            "ε₀ = {eps0} is not in (0, 1/11)"
        )));
    }
    let k = (levels as f64).powf(eps0);
    let mut scan = exceptional_set_scan_with_threshold(system, levels, k, grid_size)?;
    let bound = (levels as f64).powf(-eps0);
    scan.eps0 = Some(eps0);
    scan.bound = Some(bound);
    scan.satisfies_bound = Some(scan.e_measure_full < bound);
    Ok(scan)
}

/// As [`exceptional_set_scan`] with an explicit threshold `K`.
pub fn exceptional_set_scan_with_threshold(
    system: &SimilaritySystem,
    levels: usize,
    k: f64,
    grid_size: usize,
) -> Result<ExceptionalScan> {
    if levels == 0 || grid_size == 0 {
        return Err(Error::Precondition(
            "N and the grid size must be positive".into(),
        ));
    }
    if !(k > 0.0) {
        return Err(Error::Domain(format!("level K must be positive, got {k}")));
    }
    let requested = disc_count(system, levels);
    if requested > DEFAULT_BUDGET as u128 {
        return Err(Error::Budget {
            requested,
            budget: DEFAULT_BUDGET,
        });
    }
    let period = system.projection_period();
    let sets: Vec<DiscSet> = (1..=levels)
        .map(|n| disc_set(system, n))
        .collect::<Result<_>>()?;
    let theta_grid: Vec<f64> = midpoints(0.0, period, grid_size).collect();
    let threshold = k.powi(-3);
    let a_star_measures: Vec<f64> = theta_grid
        .par_iter()
        .map(|&theta| {
            let f_star = sets.iter().fold(StepFunction::zero(), |acc, s| {
                acc.pointwise_max(&multiplicity_function(s, theta))
            });
            level_set(&f_star, k).map(|a| a.measure())
        })
        .collect::<Result<_>>()?;
    let in_e: Vec<bool> = a_star_measures.iter().map(|&m| m <= threshold).collect();
    let spacing = period / grid_size as f64;
    let count = in_e.iter().filter(|&&b| b).count();
    let e_measure_estimate = spacing * count as f64;
    Ok(ExceptionalScan {
        levels,
        eps0: None,
        k_threshold: k,
        scan_period: period,
        theta_grid,
        a_star_measures,
        in_e,
        e_measure_estimate,
        e_measure_full: e_measure_estimate * (PI / period),
        bound: None,
        satisfies_bound: None,
    })
}

/// The quantities linking `|ℒ|`, `|A_K|` and the norms of `f` at one angle.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChainReport {
    pub theta: f64,
    pub level: usize,
    pub k_threshold: f64,
    /// `|ℒ| = |{f > 0}|`.
    pub measure_l: f64,
    /// `|{f ≥ 1}|`, the alternative reading of `ℒ`; reported only.
    pub measure_a1: f64,
    pub measure_ak: f64,
    pub coverage_weight: f64,
    pub holder_p: f64,
    pub holder_q: f64,
    pub lp_norm: f64,
    /// `||f||_p^{-q}`, a lower bound for `|ℒ|`.
    pub holder_bound: f64,
    pub l2_norm: f64,
    /// `||f||_2^{-2}`, a lower bound for `|ℒ|`.
    pub duality_bound: f64,
    /// `w |ℒ ∖ A_K| + K |A_K|`, at most `∫ f = 1`.
    pub mass_split: f64,
    /// `1 − (K − 1) |A_K|`, the upper bound for `|ℒ|` valid when `f ≥ 1` on
    /// `ℒ`; reported only.
    pub naive_bound: f64,
    pub naive_bound_holds: bool,
    /// `||f||_2^2 / K`, for trend inspection.
    pub l2_squared_over_k: f64,
}

/// Computes a [`ChainReport`] and asserts the two provable inequalities
/// `|ℒ| · ||f||_2^2 ≥ 1` and `w |ℒ ∖ A_K| + K |A_K| ≤ 1`.
///
/// `K` must exceed the coverage weight `w` (`1/2` for the gasket) and the
/// Hölder exponent `p` must exceed 1.
pub fn estimate_chain_report(set: &DiscSet, theta: f64, k: f64, p: f64) -> Result<ChainReport> {
    let weight = set.coverage_weight();
    if !(k > weight) {
        return Err(Error::Precondition(format!(
            "K = {k} must exceed the coverage weight {weight}"
        )));
    }
    if !(p > 1.0) {
        return Err(Error::Domain(format!(
            "Hölder exponent p = {p} must exceed 1"
        )));
    }
    let f = multiplicity_function(set, theta);
    let support = f.support();
    let a_k = level_set(&f, k)?;
    let measure_l = support.measure();
    let measure_ak = a_k.measure();
    let q = if p.is_infinite() { 1.0 } else { p / (p - 1.0) };
    let lp = lp_norm(&f, p)?;
    let l2 = lp_norm(&f, 2.0)?;
    let mass_split = weight * support.difference_measure(&a_k) + k * measure_ak;
    let naive_bound = 1.0 - (k - 1.0) * measure_ak;
    let report = ChainReport {
        theta,
        level: set.level(),
        k_threshold: k,
        measure_l,
        measure_a1: level_set(&f, 1.0)?.measure(),
        measure_ak,
        coverage_weight: weight,
        holder_p: p,
        holder_q: q,
        lp_norm: lp,
        holder_bound: lp.powf(-q),
        l2_norm: l2,
        duality_bound: l2.powi(-2),
        mass_split,
        naive_bound,
        naive_bound_holds: measure_l <= naive_bound,
        l2_squared_over_k: l2 * l2 / k,
    };
    if set.is_empty() {
        return Ok(report);
    }
    if measure_l * l2 * l2 < 1.0 - INEQUALITY_TOL {
        return Err(Error::Invariant(format!(
            "duality: |L| ||f||_2^2 = {} < 1 at θ = {theta}",
            measure_l * l2 * l2
        )));
    }
    if mass_split > 1.0 + INEQUALITY_TOL {
        return Err(Error::Invariant(format!(
            "mass split {mass_split} exceeds 1 at θ = {theta}, K = {k}"
        )));
    }
    Ok(report)
}
