//! Command-line driver for `tps-core`: model configuration, seeded
//! verification sweeps, and JSON/CSV reports.
//!
//! Every command is deterministic: the same arguments produce the same
//! bytes on stdout.

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod report;
pub mod sampling;
pub mod suites;

pub use cli::{run, Outcome};
pub use error::CliError;
