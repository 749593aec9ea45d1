//! Command-line front end for `epr-ga`.

pub mod args;
pub mod error;
pub mod output;
pub mod run;

pub use args::Cli;
pub use error::CliError;
pub use run::{run, Rendered};
