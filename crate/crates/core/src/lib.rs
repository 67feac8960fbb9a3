//! Committee selection under label-based diversity constraints.
//!
//! Candidates carry labels (gender, seniority, region, ...); a diversity
//! specification restricts how many committee members may carry each label;
//! an objective function scores committees. This crate provides the exact
//! dynamic programs, matroid-based algorithms, and approximation algorithms
//! for finding maximum-score diverse committees, the recognizers for laminar
//! and layered label structures, a price-of-diversity analysis, and the
//! brute-force oracle everything is validated against.
//!
//! Entry points:
//! - [`io::InstanceFile`] parses and validates the JSON instance format.
//! - [`solvers::solve`] dispatches to the strongest applicable algorithm.
//! - [`analysis::price_of_diversity`] compares constrained and unconstrained
//!   optima as exact rationals.

pub mod analysis;
pub mod generate;
#[cfg(test)]
pub(crate) mod testkit;
pub mod io;
pub mod labels;
pub mod matroid;
pub mod model;
pub mod objectives;
pub mod ratio;
pub mod solvers;

pub use model::{
    Candidate, CandidateId, Committee, CountSet, DiversitySpec, Instance, Label, LabelId,
    Labeling, Layer, LayerKind, LayerPartition, SolveReport, SolveStatus, ValidationError,
};
pub use objectives::{borda_score, Objective, PreferenceProfile};
pub use ratio::Ratio;
pub use solvers::{solve, AlgorithmChoice, SolveError, SolveMode, SolveOptions};
