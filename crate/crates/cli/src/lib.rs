//! Command-line front end for the metric-gauntlet evaluation toolkit:
//! file plumbing, report rendering, and the four subcommands
//! (`score`, `loo`, `perturb`, `search-ss`).

pub mod commands;
pub mod error;
pub mod io;
pub mod table;

pub use error::{CliError, Result};
