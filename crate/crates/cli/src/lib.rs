//! Command-line driver for `siegelfc`: argument parsing, the on-disk
//! coefficient cache, and CSV report emitters.

pub mod cache;
pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod forms;
mod selftest;

pub use error::CliError;
