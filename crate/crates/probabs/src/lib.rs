//! File formats and command-line front end for `probabs-core`.
//!
//! Everything that touches the filesystem lives here: the predicates-file
//! reader, JSON and CSV writers, the explicit-state PRISM export and the
//! `probabs` command itself.

pub mod cli;
pub mod config;
pub mod json;
pub mod preds;
pub mod prism;
pub mod table;

pub use config::{Format, RunConfig};
