//! Experiment driver for the `logchol` SPD geometry library: interpolation
//! and determinant studies, mean identities, transport timings, stability
//! under ill-conditioning and the Log-Cholesky versus affine-invariant mean
//! gap. Results are emitted as versioned JSON reports.

pub mod cli;
mod error;
pub mod experiments;
pub mod fixtures;
pub mod glyph;
pub mod report;
pub mod timing;

pub use error::{LabError, Result, EXIT_NUMERICAL, EXIT_OK, EXIT_USAGE};
