//! Constraint-consistent multi-objective genetic algorithm toolkit.
//!
//! The crate is organised around an NSGA-II engine ([`engine`]) that delegates
//! recombination of *linked gene groups* to lattice-based operators
//! ([`lattice`]). Two domains ship with the crate: spherical geometry and
//! land-masked geographic search ([`geo`]), and circular-orbit ground-track
//! coverage ([`orbit`]). [`problems`] wires those domains into runnable
//! optimisation problems and [`study`] drives the benchmark studies used by
//! the command-line front end.

// NaN must fail the `!(x > bound)` guards, so they stay as written.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod engine;
pub mod error;
pub mod geo;
pub mod lattice;
pub mod orbit;
pub mod par;
pub mod problems;
pub mod rng;
pub mod study;

pub use engine::{
    dominates, run, run_with_observer, Chromosome, GaConfig, GeneLayout, Individual,
    LengthClass, LinkedGeneGroup, ObjectiveVector, OperatorChoice, Problem, RunResult,
};
pub use error::{Error, Result};
pub use par::Execution;
