//! Exact computation of twisted and intersection cohomology for weighted
//! hyperplane arrangements.
//!
//! The crate takes an arrangement of rational hyperplanes with rational
//! monodromy exponents, builds the combinatorics of a wonderful resolution
//! for a chosen building set, verifies the per-edge fiber vanishing
//! ("condition A") for the local system and its dual, and, when the
//! verification succeeds, reports certified Betti numbers (or intervals) of
//! the intersection cohomology of the ambient space with coefficients in
//! the intermediate extension.
//!
//! Layout:
//! - [`arrangement`], [`poset`]: exact arrangement combinatorics.
//! - [`faces`], [`salvetti`], [`aomoto`], [`cyclotomic`]: the twisted
//!   cohomology engine and its oracles.
//! - [`resolution`], [`assembly`]: stratified models of the resolved
//!   complement and interval assembly.
//! - [`verdict`]: per-edge verdicts and the applicability report.
//! - [`examples`], [`report`], [`cli`]: example library, report emission
//!   and the command-line front end.

pub mod arrangement;
pub mod rat;

pub mod linalg;

pub mod cyclotomic;

pub mod poset;

pub mod examples;

pub mod faces;
pub mod salvetti;

pub mod aomoto;

pub mod assembly;
pub mod resolution;

pub mod verdict;

pub mod cli;
pub mod report;
