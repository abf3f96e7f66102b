//! Command-line front end for the `dppc` solvers: solve, generate and
//! benchmark, writing CSV.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod grid;

pub use args::Cli;
pub use commands::run;
pub use error::{CliError, Result};
