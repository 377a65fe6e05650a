//! Orthogonal projections, interval unions, Favard length quadrature and
//! Buffon needle Monte Carlo.
//!
//! The projection onto the line at angle `θ` uses the coordinate along the
//! unit vector `e^{iθ}`: `p = Re(z e^{-iθ}) = x cos θ + y sin θ`. Any fixed
//! convention gives the same projected lengths.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{midpoints, pairwise_sum};
use crate::selfsimilar::DiscSet;

/// Needles per Monte Carlo block. Block `b` draws from ChaCha stream `b`.
pub const NEEDLE_BLOCK: u64 = 10_000;

/// Default offset half-width; every supported system lives in the unit disc.
pub const DEFAULT_OFFSET_HALFWIDTH: f64 = 1.0;

/// Sorted, merged, strictly disjoint closed intervals.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct IntervalUnion {
    intervals: Vec<(f64, f64)>,
}

impl IntervalUnion {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Unions arbitrary intervals. Intervals that touch (`b_i = a_j`) are
    /// merged; degenerate intervals (`a >= b`) are dropped.
    pub fn from_intervals<I>(intervals: I) -> Self
    where
        I: IntoIterator<Item = (f64, f64)>,
    {
        let mut raw: Vec<(f64, f64)> = intervals.into_iter().filter(|(a, b)| a < b).collect();
        raw.sort_by(|x, y| x.0.total_cmp(&y.0));
        Self::from_sorted(raw)
    }

    // `raw` must be sorted by left endpoint.
    fn from_sorted(raw: Vec<(f64, f64)>) -> Self {
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(raw.len());
        for (a, b) in raw {
            match merged.last_mut() {
                Some(last) if a <= last.1 => last.1 = last.1.max(b),
                _ => merged.push((a, b)),
            }
        }
        IntervalUnion { intervals: merged }
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn measure(&self) -> f64 {
        let lengths: Vec<f64> = self.intervals.iter().map(|(a, b)| b - a).collect();
        pairwise_sum(&lengths)
    }

    pub fn contains(&self, x: f64) -> bool {
        let i = self.intervals.partition_point(|&(_, b)| b < x);
        self.intervals.get(i).is_some_and(|&(a, _)| a <= x)
    }

    pub fn intersection(&self, other: &IntervalUnion) -> IntervalUnion {
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < self.intervals.len() && j < other.intervals.len() {
            let (a1, b1) = self.intervals[i];
            let (a2, b2) = other.intervals[j];
            let lo = a1.max(a2);
            let hi = b1.min(b2);
            if lo < hi {
                out.push((lo, hi));
            }
            if b1 < b2 {
                i += 1;
            } else {
                j += 1;
            }
        }
        IntervalUnion::from_sorted(out)
    }

    /// Measure of `self ∖ other`.
    pub fn difference_measure(&self, other: &IntervalUnion) -> f64 {
        self.measure() - self.intersection(other).measure()
    }

    /// Every interval of `self` lies inside one interval of `other`, with
    /// endpoint slack `tol`.
    pub fn is_subset_of(&self, other: &IntervalUnion, tol: f64) -> bool {
        self.intervals.iter().all(|&(a, b)| {
            let i = other.intervals.partition_point(|&(_, ob)| ob < b - tol);
            other
                .intervals
                .get(i)
                .is_some_and(|&(oa, ob)| oa <= a + tol && b <= ob + tol)
        })
    }

    /// Same number of intervals and every endpoint within `tol`.
    pub fn approx_eq(&self, other: &IntervalUnion, tol: f64) -> bool {
        self.intervals.len() == other.intervals.len()
            && self
                .intervals
                .iter()
                .zip(&other.intervals)
                .all(|(p, q)| (p.0 - q.0).abs() <= tol && (p.1 - q.1).abs() <= tol)
    }
}

pub fn measure(u: &IntervalUnion) -> f64 {
    u.measure()
}

/// Coordinate of `z` along the unit vector at angle `theta`.
pub fn projection_coordinate(z: Complex64, theta: f64) -> f64 {
    let (s, c) = theta.sin_cos();
    z.re * c + z.im * s
}

/// Projection of the closed disc `B(center, radius)` onto the line at angle
/// `theta`.
pub fn project_disc(center: Complex64, radius: f64, theta: f64) -> Result<(f64, f64)> {
    if !(radius > 0.0) {
        return Err(Error::Precondition(format!(
            "radius {radius} must be positive"
        )));
    }
    let p = projection_coordinate(center, theta);
    Ok((p - radius, p + radius))
}

/// Sorted projected centers of a disc set.
pub fn projected_centers(set: &DiscSet, theta: f64) -> Vec<f64> {
    let (s, c) = theta.sin_cos();
    let mut p: Vec<f64> = set.centers().iter().map(|z| z.re * c + z.im * s).collect();
    p.sort_unstable_by(f64::total_cmp);
    p
}

/// Exact union of the projected discs, by sort and sweep.
pub fn project_set(set: &DiscSet, theta: f64) -> IntervalUnion {
    let r = set.radius();
    let raw = projected_centers(set, theta)
        .into_iter()
        .map(|p| (p - r, p + r))
        .collect();
    IntervalUnion::from_sorted(raw)
}

/// `|proj_θ(set)|` for each angle, in input order.
pub fn projection_scan(set: &DiscSet, thetas: &[f64]) -> Vec<f64> {
    thetas
        .par_iter()
        .map(|&t| project_set(set, t).measure())
        .collect()
}

/// Favard length `(1/π) ∫_0^π |proj_θ(set)| dθ` by the midpoint rule on `nodes`
/// uniform cells.
///
/// With `symmetry_period = Some(p)` the mean is taken over `[0, p)` instead,
/// which is exact when `|proj_θ|` has period `p` (`π/3` for the gasket).
pub fn favard_quadrature(set: &DiscSet, nodes: usize, symmetry_period: Option<f64>) -> Result<f64> {
    if nodes == 0 {
        return Err(Error::Precondition(
            "quadrature needs at least one node".into(),
        ));
    }
    let period = symmetry_period.unwrap_or(PI);
    if !(period > 0.0 && period <= PI) {
        return Err(Error::Precondition(format!(
            "symmetry period {period} is not in (0, π]"
        )));
    }
    let thetas: Vec<f64> = midpoints(0.0, period, nodes).collect();
    let lengths = projection_scan(set, &thetas);
    Ok(pairwise_sum(&lengths) / nodes as f64)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NeedleEstimate {
    pub favard_estimate: f64,
    pub standard_error: f64,
    pub hits: u64,
    pub samples: u64,
    pub seed: u64,
    pub offset_halfwidth: f64,
}

/// Whether the line `{x : <x, e^{iθ}> = offset}` meets the set.
pub fn line_hits(set: &DiscSet, theta: f64, offset: f64) -> bool {
    let (s, c) = theta.sin_cos();
    let r = set.radius();
    set.centers()
        .iter()
        .any(|z| (offset - (z.re * c + z.im * s)).abs() <= r)
}

/// Buffon needle estimate of the Favard length.
///
/// Lines are drawn with direction `θ ~ U[0, π)` and signed offset
/// `u ~ U[-R, R]`; the estimate is `2R · hits / samples`. The sequence is fixed
/// by `seed`: block `b` of [`NEEDLE_BLOCK`] needles uses ChaCha8 stream `b`, so
/// the hit count does not depend on scheduling.
pub fn buffon_mc(
    set: &DiscSet,
    samples: u64,
    seed: u64,
    offset_halfwidth: f64,
) -> Result<NeedleEstimate> {
    if samples == 0 {
        return Err(Error::Precondition(
            "at least one needle is required".into(),
        ));
    }
    let extent = set.extent();
    if !(offset_halfwidth >= extent) {
        return Err(Error::Precondition(format!(
            "offset half-width {offset_halfwidth} is below the set extent {extent}"
        )));
    }
    let blocks = samples.div_ceil(NEEDLE_BLOCK);
    let hits: u64 = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(b);
            let count = NEEDLE_BLOCK.min(samples - b * NEEDLE_BLOCK);
            (0..count)
                .filter(|_| {
                    let theta = rng.random::<f64>() * PI;
                    let u = (2.0 * rng.random::<f64>() - 1.0) * offset_halfwidth;
                    line_hits(set, theta, u)
                })
                .count() as u64
        })
        .sum();
    let p = hits as f64 / samples as f64;
    let width = 2.0 * offset_halfwidth;
    Ok(NeedleEstimate {
        favard_estimate: width * p,
        standard_error: width * (p * (1.0 - p) / samples as f64).sqrt(),
        hits,
        samples,
        seed,
        offset_halfwidth,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::selfsimilar::{disc_set, gasket_system};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(a: (f64, f64), b: (f64, f64)) -> bool {
        (a.0 - b.0).abs() < 1e-15 && (a.1 - b.1).abs() < 1e-15
    }

    #[test]
    fn project_disc_examples() {
        let z = c(0.0, 1.0 / 3.0);
        assert!(close(
            project_disc(z, 1.0 / 3.0, 0.0).unwrap(),
            (-1.0 / 3.0, 1.0 / 3.0)
        ));
        assert!(close(
            project_disc(z, 1.0 / 3.0, PI / 2.0).unwrap(),
            (0.0, 2.0 / 3.0)
        ));
        assert!(close(
            project_disc(c(1.0, 0.0), 0.1, PI).unwrap(),
            (-1.1, -0.9)
        ));
        assert!(project_disc(z, 0.0, 0.0).is_err());
    }

    // brute force: a point is covered iff some interval contains it; compare the
    // sweep against a dense membership scan
    #[test]
    fn gasket_level_one_projection_is_one_interval() {
        let set = disc_set(&gasket_system(), 1).unwrap();
        let u = project_set(&set, 0.0);
        let h = 3f64.sqrt() / 6.0;
        assert_eq!(u.len(), 1);
        assert!(close(u.intervals()[0], (-1.0 / 3.0 - h, 1.0 / 3.0 + h)));
        let raw: Vec<(f64, f64)> = set
            .centers()
            .iter()
            .map(|&z| project_disc(z, set.radius(), 0.0).unwrap())
            .collect();
        for i in 0..=10_000 {
            let x = -1.0 + 2.0 * i as f64 / 10_000.0;
            let covered = raw.iter().any(|&(a, b)| a <= x && x <= b);
            assert_eq!(covered, u.contains(x), "x = {x}");
        }
    }

    #[test]
    fn trivial_projections() {
        let empty = DiscSet::from_parts(0, 0.5, vec![]).unwrap();
        assert!(project_set(&empty, 0.3).is_empty());
        let one = DiscSet::from_parts(0, 0.25, vec![c(0.1, 0.2)]).unwrap();
        let u = project_set(&one, 0.7);
        let expect = project_disc(c(0.1, 0.2), 0.25, 0.7).unwrap();
        assert_eq!(u.intervals(), &[expect]);
    }

    #[test]
    fn measure_examples() {
        assert_eq!(
            IntervalUnion::from_intervals([(0.0, 1.0), (2.0, 3.0)]).measure(),
            2.0
        );
        assert_eq!(IntervalUnion::empty().measure(), 0.0);
        assert_eq!(
            IntervalUnion::from_intervals([(0.0, 1.0), (0.5, 2.0)]).measure(),
            2.0
        );
        let touching = IntervalUnion::from_intervals([(1.0, 2.0), (0.0, 1.0)]);
        assert_eq!(touching.intervals(), &[(0.0, 2.0)]);
    }

    #[test]
    fn set_operations() {
        let a = IntervalUnion::from_intervals([(0.0, 2.0), (3.0, 5.0)]);
        let b = IntervalUnion::from_intervals([(1.0, 4.0)]);
        assert_eq!(a.intersection(&b).intervals(), &[(1.0, 2.0), (3.0, 4.0)]);
        assert_eq!(a.difference_measure(&b), 2.0);
        assert!(a.intersection(&b).is_subset_of(&a, 0.0));
        assert!(!b.is_subset_of(&a, 0.0));
        assert!(a.contains(5.0) && !a.contains(2.5));
    }

    #[test]
    fn single_disc_favard_is_diameter() {
        let one = DiscSet::from_parts(0, 0.125, vec![c(0.3, -0.2)]).unwrap();
        for m in [1, 7, 100] {
            assert!((favard_quadrature(&one, m, None).unwrap() - 0.25).abs() < 1e-12);
        }
        assert!(favard_quadrature(&one, 0, None).is_err());
    }

    #[test]
    fn quadrature_refinement_and_nesting() {
        let g = gasket_system();
        let s1 = disc_set(&g, 1).unwrap();
        let v1 = favard_quadrature(&s1, 10_000, None).unwrap();
        let v1b = favard_quadrature(&s1, 20_000, None).unwrap();
        assert!((v1 - v1b).abs() < 1e-4);
        let v2 = favard_quadrature(&disc_set(&g, 2).unwrap(), 10_000, None).unwrap();
        assert!(v2 < v1);
    }

    #[test]
    fn symmetry_reduction_matches_full_range() {
        let g = gasket_system();
        let s = disc_set(&g, 3).unwrap();
        let full = favard_quadrature(&s, 6000, None).unwrap();
        let reduced = favard_quadrature(&s, 2000, Some(PI / 3.0)).unwrap();
        assert!((full - reduced).abs() < 1e-12);
    }

    #[test]
    fn buffon_single_disc_and_empty() {
        let r = 0.2;
        let one = DiscSet::from_parts(0, r, vec![c(0.0, 0.0)]).unwrap();
        let est = buffon_mc(&one, 200_000, 7, 1.0).unwrap();
        assert!((est.favard_estimate - 2.0 * r).abs() <= 3.0 * est.standard_error);
        assert_eq!(
            est.favard_estimate,
            2.0 * est.hits as f64 / est.samples as f64
        );

        let empty = DiscSet::from_parts(0, 0.5, vec![]).unwrap();
        let e = buffon_mc(&empty, 1000, 1, 1.0).unwrap();
        assert_eq!((e.favard_estimate, e.standard_error, e.hits), (0.0, 0.0, 0));
    }

    #[test]
    fn buffon_preconditions() {
        let one = DiscSet::from_parts(0, 0.5, vec![c(0.8, 0.0)]).unwrap();
        assert!(matches!(
            buffon_mc(&one, 10, 1, 1.0),
            Err(Error::Precondition(_))
        ));
        assert!(buffon_mc(&one, 0, 1, 2.0).is_err());
    }

    #[test]
    fn buffon_is_deterministic() {
        let set = disc_set(&gasket_system(), 3).unwrap();
        let a = buffon_mc(&set, 25_000, 99, 1.0).unwrap();
        let b = buffon_mc(&set, 25_000, 99, 1.0).unwrap();
        assert_eq!(a, b);
        let c = buffon_mc(&set, 25_000, 100, 1.0).unwrap();
        assert_ne!(a.hits, c.hits);
    }
}
