//! File formats, reports and the command-line driver for `latticesol-core`.

pub mod commands;
pub mod config;
pub mod error;
pub mod formats;

pub use error::{CliError, Result};
