//! Two-step laser excitation of positronium (1 → 3 → Rydberg n) in a
//! magnetic field.

// `!(x > 0.0)` style checks are kept because they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bloch;
pub mod config;
pub mod constants;
pub mod dipole;
pub mod error;
pub mod level_structure;
pub mod output;
pub mod saturation;
pub mod scan;

pub use error::{Error, Result};

#[cfg(test)]
mod testutil;
