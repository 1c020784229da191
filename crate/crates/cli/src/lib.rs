//! Command-line harness for `permoptics`: experiment configs, the run log
//! and the reproduction recipes behind the `permoptics` binary.

pub mod cli;
pub mod config;
pub mod error;
pub mod output;
pub mod record;
pub mod reproduce;

pub use cli::{run, Cli, Outcome};
pub use error::{exit, CliError};
