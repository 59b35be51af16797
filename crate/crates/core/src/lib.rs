//! Synthesis and realizability analysis for quantum stochastic differential
//! equations built from SLH parametrizations: linear (oscillator), bilinear
//! (two-level) and bilinear-linear cascades of the two.
//!
//! - [`algebra`]: hat map, Levi-Civita stacking matrix, `vec`/Kronecker tools.
//! - [`model`]: parameter and QSDE types, synthesis from `(L, H)`.
//! - [`realizability`]: commutation-preservation and physical-realizability
//!   checks with parameter recovery.
//! - [`oprep`]: a truncated Fock-space ⊗ ℂ² operator model used as an
//!   independent oracle for the matrix-level results.
//! - [`schema`] and [`cli`]: JSON file formats and the `qsde` command.

pub mod algebra;
pub mod cli;
pub mod error;
pub mod model;
pub mod oprep;
pub mod realizability;
pub mod schema;

pub use error::{Error, Result};
