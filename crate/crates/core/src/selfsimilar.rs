//! Self-similar disc systems.
//!
//! A system of `k` homotheties with common ratio `ρ` acts on the closed unit
//! disc. Map `j` sends the unit disc onto the level-1 disc `B(c_j, ρ)`, i.e.
//! `F_j(z) = c_j + ρ z`. Composing along an address `(a_1, …, a_n)` gives the
//! level-`n` disc
//!
//! ```text
//! B(c_{a_1} + ρ c_{a_2} + … + ρ^{n-1} c_{a_n}, ρ^n)
//! ```
//!
//! For the gasket the level-1 centers are `(1/3) e^{iπ(1/2 + 2α/3)}`, so the
//! level-`n` centers are `Σ_{k=1}^{n} 3^{-k} e^{iπ(1/2 + 2α_k/3)}` and the
//! discs have radius `3^{-n}`.
//!
//! Gasket digits `α ∈ {-1, 0, 1}` are stored as `α + 1 ∈ {0, 1, 2}`.

use std::f64::consts::PI;
use std::fmt;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on materialised centers: `3^14`.
pub const DEFAULT_BUDGET: usize = 4_782_969;

/// Reserved system name for the one-dimensional Sierpinski gasket.
pub const GASKET_NAME: &str = "gasket";

const GEOMETRY_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct SimilaritySystem {
    ratio: f64,
    centers: Vec<Complex64>,
    disjoint: bool,
}

impl SimilaritySystem {
    /// Builds a system from its level-1 disc centers.
    ///
    /// Only structural requirements are enforced here (at least one map,
    /// ratio in `(0, 1)`, finite and pairwise distinct centers). The
    /// geometric requirements are checked by [`SimilaritySystem::validate`].
    pub fn new(ratio: f64, centers: Vec<Complex64>, disjoint: bool) -> Result<Self> {
        if centers.is_empty() {
            return Err(Error::Precondition(
                "a system needs at least one map".into(),
            ));
        }
        if !(ratio > 0.0 && ratio < 1.0) {
            return Err(Error::Precondition(format!(
                "ratio {ratio} is not in (0, 1)"
            )));
        }
        if let Some(i) = centers
            .iter()
            .position(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(Error::Precondition(format!("center {i} is not finite")));
        }
        for i in 0..centers.len() {
            for j in i + 1..centers.len() {
                if centers[i] == centers[j] {
                    return Err(Error::Precondition(format!("centers {i} and {j} coincide")));
                }
            }
        }
        Ok(Self {
            ratio,
            centers,
            disjoint,
        })
    }

    /// Number of maps `k`.
    pub fn branch_count(&self) -> usize {
        self.centers.len()
    }

    pub fn ratio(&self) -> f64 {
        self.ratio
    }

    /// Level-1 disc centers, indexed by digit.
    pub fn centers(&self) -> &[Complex64] {
        &self.centers
    }

    pub fn disjointness_required(&self) -> bool {
        self.disjoint
    }

    pub fn with_disjointness(mut self, required: bool) -> Self {
        self.disjoint = required;
        self
    }

    /// Largest `|c_j|`.
    pub fn max_center_modulus(&self) -> f64 {
        self.centers.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Radius of a disc centred at the origin containing every level-`n`
    /// disc for every `n ≥ 1`.
    pub fn bounding_radius(&self) -> f64 {
        self.max_center_modulus() / (1.0 - self.ratio) + self.ratio
    }

    /// Smallest period in `θ` of `|proj_θ|` implied by a rotational symmetry of
    /// the level-1 centers about the origin.
    ///
    /// An order-`r` rotation combined with the trivial period `π` gives `π/r`
    /// for odd `r` and `2π/r` for even `r`. Returns `π` if no symmetry exists.
    pub fn projection_period(&self) -> f64 {
        let k = self.branch_count();
        for order in (2..=k).rev() {
            if self.is_rotation_invariant(order) {
                return if order % 2 == 1 {
                    PI / order as f64
                } else {
                    2.0 * PI / order as f64
                };
            }
        }
        PI
    }

    fn is_rotation_invariant(&self, order: usize) -> bool {
        let rot = Complex64::from_polar(1.0, 2.0 * PI / order as f64);
        self.centers.iter().all(|&c| {
            let r = c * rot;
            self.centers.iter().any(|&d| (r - d).norm() <= GEOMETRY_TOL)
        })
    }

    /// Checks unit-disc containment, nesting and, when required, disjointness
    /// of the level-1 discs.
    pub fn validate(&self) -> ValidationReport {
        let mut checks = Vec::new();

        let outside: Vec<usize> = self
            .centers
            .iter()
            .enumerate()
            .filter(|(_, c)| c.norm() > 1.0 + GEOMETRY_TOL)
            .map(|(i, _)| i)
            .collect();
        checks.push(Check {
            name: "unit_disc",
            passed: outside.is_empty(),
            detail: if outside.is_empty() {
                "every center lies in the closed unit disc".into()
            } else {
                format!("centers outside the unit disc: {outside:?}")
            },
        });

        // B(c_j, ρ) ⊂ B(0, 1) for every j; this is exactly what makes each
        // level-(n+1) disc sit inside its parent.
        let reach = self.max_center_modulus() + self.ratio;
        let worst = self
            .centers
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
            .map(|(i, _)| i)
            .unwrap_or(0);
        checks.push(Check {
            name: "nesting",
            passed: reach <= 1.0 + GEOMETRY_TOL,
            detail: format!("max |c| + ratio = {reach} (center {worst})"),
        });

        if self.disjoint {
            let mut offending = None;
            'outer: for i in 0..self.centers.len() {
                for j in i + 1..self.centers.len() {
                    let d = (self.centers[i] - self.centers[j]).norm();
                    if d <= 2.0 * self.ratio {
                        offending = Some((i, j, d));
                        break 'outer;
                    }
                }
            }
            checks.push(Check {
                name: "disjointness",
                passed: offending.is_none(),
                detail: match offending {
                    None => "level-1 discs are pairwise disjoint".into(),
                    Some((i, j, d)) => format!(
                        "discs {i} and {j} meet: center distance {d} <= {}",
                        2.0 * self.ratio
                    ),
                },
            });
        }

        ValidationReport { checks }
    }

    /// Parses the JSON system document
    /// `{"k": int, "ratio": float, "centers": [[re, im], …], "disjoint": bool}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: SystemDoc = serde_json::from_str(text)?;
        doc.try_into()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&SystemDoc::from(self))?)
    }

    /// Resolves a system reference: the reserved name `gasket` or a path to a
    /// JSON system document.
    pub fn resolve(reference: &str) -> Result<Self> {
        if reference == GASKET_NAME {
            return Ok(gasket_system());
        }
        let text = std::fs::read_to_string(Path::new(reference))?;
        Self::from_json(&text)
    }
}

#[derive(Serialize, Deserialize)]
struct SystemDoc {
    k: usize,
    ratio: f64,
    centers: Vec<[f64; 2]>,
    #[serde(default)]
    disjoint: bool,
}

impl TryFrom<SystemDoc> for SimilaritySystem {
    type Error = Error;

    fn try_from(doc: SystemDoc) -> Result<Self> {
        if doc.k != doc.centers.len() {
            return Err(Error::Precondition(format!(
                "k = {} but {} centers were given",
                doc.k,
                doc.centers.len()
            )));
        }
        let centers = doc
            .centers
            .iter()
            .map(|&[re, im]| Complex64::new(re, im))
            .collect();
        SimilaritySystem::new(doc.ratio, centers, doc.disjoint)
    }
}

impl From<&SimilaritySystem> for SystemDoc {
    fn from(s: &SimilaritySystem) -> Self {
        SystemDoc {
            k: s.branch_count(),
            ratio: s.ratio,
            centers: s.centers.iter().map(|c| [c.re, c.im]).collect(),
            disjoint: s.disjoint,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// `Ok(())` if every check passed, otherwise a validation error naming the
    /// failed checks.
    pub fn into_result(self) -> Result<()> {
        if self.passed() {
            return Ok(());
        }
        let failed: Vec<String> = self
            .checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| format!("{}: {}", c.name, c.detail))
            .collect();
        Err(Error::Validation(failed.join("; ")))
    }
}

/// Unit directions `e^{iπ(1/2 + 2α/3)}` of the gasket maps, indexed by stored
/// digit `α + 1`.
pub fn gasket_directions() -> [Complex64; 3] {
    [-1.0, 0.0, 1.0].map(|alpha: f64| Complex64::from_polar(1.0, PI * (0.5 + 2.0 * alpha / 3.0)))
}

/// The gasket system: `k = 3`, `ρ = 1/3`, level-1 centers
/// `(1/3) e^{iπ(1/2 + 2α/3)}`. The level-1 discs overlap, so disjointness is
/// not required.
pub fn gasket_system() -> SimilaritySystem {
    let centers = gasket_directions().iter().map(|d| d / 3.0).collect();
    SimilaritySystem::new(1.0 / 3.0, centers, false).expect("gasket constants are valid")
}

/// A word over `{0, …, k-1}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Address(Vec<usize>);

impl Address {
    pub fn new(digits: Vec<usize>) -> Self {
        Address(digits)
    }

    pub fn empty() -> Self {
        Address(Vec::new())
    }

    /// Converts gasket digits `α ∈ {-1, 0, 1}` to stored digits `α + 1`.
    pub fn from_gasket_digits(alphas: &[i8]) -> Result<Self> {
        alphas
            .iter()
            .enumerate()
            .map(|(position, &a)| {
                if (-1..=1).contains(&a) {
                    Ok((a + 1) as usize)
                } else {
                    Err(Error::Domain(format!(
                        "gasket digit {a} at position {position} is not in {{-1, 0, 1}}"
                    )))
                }
            })
            .collect::<Result<Vec<_>>>()
            .map(Address)
    }

    pub fn digits(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn check(&self, branch_count: usize) -> Result<()> {
        match self.0.iter().position(|&d| d >= branch_count) {
            None => Ok(()),
            Some(position) => Err(Error::InvalidAddress {
                digit: self.0[position],
                position,
                branch_count,
            }),
        }
    }

    pub fn push(&mut self, digit: usize) {
        self.0.push(digit);
    }
}

impl fmt::Display for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.0 {
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

/// Center of the disc with the given address. The empty address is the
/// origin.
pub fn center(system: &SimilaritySystem, address: &Address) -> Result<Complex64> {
    address.check(system.branch_count())?;
    Ok(horner(system, address.digits()))
}

// Accumulates from the deepest digit outwards.
fn horner(system: &SimilaritySystem, digits: &[usize]) -> Complex64 {
    digits.iter().rev().fold(Complex64::new(0.0, 0.0), |z, &d| {
        system.centers[d] + z * system.ratio
    })
}

/// `ρ^n` by repeated multiplication.
pub fn level_radius(ratio: f64, level: usize) -> f64 {
    (0..level).fold(1.0, |r, _| r * ratio)
}

/// `k^n` without overflow for any realistic level.
pub fn disc_count(system: &SimilaritySystem, level: usize) -> u128 {
    let k = system.branch_count() as u128;
    (0..level).fold(1u128, |acc, _| acc.saturating_mul(k))
}

/// The level-`n` discs: `k^n` centers in lexicographic address order and a
/// common radius `ρ^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscSet {
    level: usize,
    radius: f64,
    centers: Vec<Complex64>,
    // (kρ)^n; the disc count times the radius for ad-hoc sets
    mass_scale: f64,
}

impl DiscSet {
    /// An arbitrary collection of equal discs, for tests and ad-hoc sets.
    pub fn from_parts(level: usize, radius: f64, centers: Vec<Complex64>) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::Precondition(format!(
                "radius {radius} must be positive"
            )));
        }
        let mass_scale = centers.len() as f64 * radius;
        Ok(Self {
            level,
            radius,
            centers,
            mass_scale,
        })
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn centers(&self) -> &[Complex64] {
        &self.centers
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    /// Height of a single covering disc in the unit-mass multiplicity
    /// function: `1 / (2 (kρ)^n)`, which is `1/2` for the gasket.
    ///
    /// Each of the `k^n` discs carries mass `k^{-n}` spread over its projected
    /// interval of length `2ρ^n`.
    pub fn coverage_weight(&self) -> f64 {
        0.5 / self.mass_scale
    }

    /// Largest `|center| + radius`, i.e. the smallest origin-centred disc
    /// containing the set. Zero for an empty set.
    pub fn extent(&self) -> f64 {
        self.centers
            .iter()
            .map(|c| c.norm() + self.radius)
            .fold(0.0, f64::max)
    }
}

/// Materialises the level-`n` disc set under [`DEFAULT_BUDGET`].
pub fn disc_set(system: &SimilaritySystem, level: usize) -> Result<DiscSet> {
    disc_set_with_budget(system, level, DEFAULT_BUDGET)
}

pub fn disc_set_with_budget(
    system: &SimilaritySystem,
    level: usize,
    budget: usize,
) -> Result<DiscSet> {
    let requested = disc_count(system, level);
    if requested > budget as u128 {
        return Err(Error::Budget { requested, budget });
    }
    // Level j is built from level j-1 as c_a + ρ·(previous), digit-major, which
    // reproduces lexicographic order and the Horner evaluation exactly.
    let mut centers = vec![Complex64::new(0.0, 0.0)];
    for _ in 0..level {
        let mut next = Vec::with_capacity(centers.len() * system.branch_count());
        for &c in &system.centers {
            next.extend(centers.iter().map(|&z| c + z * system.ratio));
        }
        centers = next;
    }
    let k_rho = system.branch_count() as f64 * system.ratio;
    Ok(DiscSet {
        level,
        radius: level_radius(system.ratio, level),
        centers,
        mass_scale: level_radius(k_rho, level),
    })
}

/// Visits every level-`n` address and center in lexicographic order without
/// materialising the set. Centers are bit-identical to [`disc_set`].
pub fn for_each_center<F>(system: &SimilaritySystem, level: usize, mut visit: F)
where
    F: FnMut(&Address, Complex64),
{
    let k = system.branch_count();
    let mut digits = vec![0usize; level];
    loop {
        let address = Address(digits.clone());
        visit(&address, horner(system, &digits));
        // odometer, last digit fastest
        let mut pos = level;
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < k {
                break;
            }
            digits[pos] = 0;
        }
    }
}
