//! Command-line front end for the `numerorum` library: subcommands for each
//! table and experiment, invariant suites, and the `reproduce` report.

pub mod checks;
pub mod cli;
pub mod config;
pub mod reproduce;

pub use cli::run;
