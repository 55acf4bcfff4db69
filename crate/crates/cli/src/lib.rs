//! Sweep engine, figure presets and CSV output behind the `multiphoton` binary.

pub mod config;
pub mod csv;
pub mod demo;
pub mod error;
pub mod presets;
pub mod sweep;

pub use error::SweepError;
pub use sweep::{run_sweep, run_sweep_with, verify_bounds, SweepSpec, SweepTable, VerifyOptions};
