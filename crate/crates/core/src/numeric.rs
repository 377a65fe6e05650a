//! Small numeric helpers shared by the scans.

/// Sums `values` by recursive halving.
///
/// The reduction tree depends only on the slice length, so the result is
/// bit-identical however the values were produced.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    const LEAF: usize = 32;
    if values.len() <= LEAF {
        return values.iter().fold(0.0, |acc, v| acc + v);
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// Midpoints of `count` equal cells tiling `[lo, hi)`.
pub fn midpoints(lo: f64, hi: f64, count: usize) -> impl Iterator<Item = f64> {
    let step = (hi - lo) / count as f64;
    (0..count).map(move |i| lo + (i as f64 + 0.5) * step)
}
