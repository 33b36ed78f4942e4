//! Command-line front end and report formats for `sprime-core`.

pub mod cli;
pub mod commands;
pub mod config;
pub mod descriptor;
pub mod error;
pub mod oracle_run;
pub mod report;
pub mod sweep;
pub mod verify;

pub use cli::run_with;
pub use error::{exit, CliError};
