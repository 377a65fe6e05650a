//! Numerical laboratory for the Favard length (Buffon needle probability) of
//! disc approximations to self-similar sets.
//!
//! The crate is organised bottom-up:
//!
//! * [`selfsimilar`] builds similarity systems and their level-`n` disc sets,
//!   including the canonical one-dimensional Sierpinski gasket.
//! * [`geometry`] projects disc sets onto lines, measures interval unions and
//!   estimates Favard length by quadrature and by Buffon needle Monte Carlo.
//! * [`multiplicity`] represents the projection multiplicity function exactly
//!   as a step function and derives norms, level sets, the maximal function and
//!   the exceptional angle set.
//! * [`fourier`] evaluates the Riesz-type products on the Fourier side, the
//!   sublevel ("small value") sets of the high-frequency product and the planar
//!   zero-location geometry.
//! * [`salem`] compares exponential-sum energy with indicator-overlap energy.
//! * [`experiments`] runs decay experiments and fits power and
//!   `exp(-c sqrt(log n))` models.
//!
//! Every operation is a pure function of its inputs. Parallel scans collect in
//! index order and reduce with [`numeric::pairwise_sum`], so results do not
//! depend on the number of worker threads.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod experiments;
pub mod fourier;
pub mod geometry;
pub mod io;
pub mod multiplicity;
pub mod numeric;
pub mod salem;
pub mod selfsimilar;

pub use error::{Error, Result};
pub use geometry::{IntervalUnion, NeedleEstimate};
pub use multiplicity::StepFunction;
pub use selfsimilar::{Address, DiscSet, SimilaritySystem};
