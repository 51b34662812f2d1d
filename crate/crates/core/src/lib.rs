//! Deterministic frequency seriation.
//!
//! Frequency seriation orders archaeological assemblages so that every
//! artifact class rises to a single peak of relative frequency and then
//! declines (the "battleship curve"). Because class data cannot fix the
//! temporal polarity of a solution, an ordering and its mirror are the same
//! solution, and a set of `n` assemblages admits `n!/2` distinct candidate
//! orderings. This crate provides:
//!
//! * [`combinatorics`] — exact big-integer counts of the solution space
//!   (unique orderings, set partitions, multigroup totals) and wall-clock
//!   feasibility estimates for exhaustive testing.
//! * [`model`] — the assemblage count matrix, relative frequencies,
//!   mirror-canonical orderings, and the unimodality evaluation that decides
//!   whether an ordering is a valid seriation.
//! * [`bootstrap`] — sample-size-aware tolerance: multinomial resampling of
//!   assemblage rows into per-class confidence intervals, so that only
//!   statistically significant frequency reversals count as violations.
//! * [`enumeration`] — exhaustive, worker-parallel search over canonical
//!   orderings for single-group seriation.
//! * [`multigroup`] — partitioning assemblages into several groups that each
//!   seriate validly, by exact partition enumeration or by a greedy
//!   agglomerative heuristic. Solvers are exposed behind a named strategy
//!   registry.
//! * [`planted`] — generators for synthetic instances with a known valid
//!   ordering or grouping, used by the test suite and handy for benchmarks.

pub mod bootstrap;
pub mod combinatorics;
pub mod enumeration;
pub mod model;
pub mod multigroup;
pub mod planted;

pub use combinatorics::{BigCount, ComputeBudget, TimeEstimate};
pub use model::{AssemblageMatrix, EvaluationReport, Ordering, UnimodalityCriterion};
