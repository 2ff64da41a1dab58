//! File formats, threading and the command-line driver for `homperc-core`.

pub mod cli;
pub mod error;
pub mod hpg;
pub mod parallel;
pub mod table;

pub use error::CliError;
