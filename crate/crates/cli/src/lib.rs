//! Batch front end for the `k1lab` engine.

pub mod check;
pub mod info;
pub mod manifest;

pub use check::{run, write_report, RunOptions, RunReport};
pub use manifest::Manifest;
