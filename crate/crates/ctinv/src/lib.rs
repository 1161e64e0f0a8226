//! Command-line pipeline around `ctinv-core`: configuration, file formats,
//! run reports and the subcommands of the `ctinv` binary.

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod formats;
pub mod report;

pub use config::JobConfig;
pub use error::CliError;
