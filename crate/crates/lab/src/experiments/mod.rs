//! The experiments behind each CLI command. Each takes a plain config and
//! returns an [`ExperimentReport`](crate::report::ExperimentReport).

pub mod bench;
pub mod interpolate;
pub mod mean;
pub mod mean_gap;
pub mod stability;
