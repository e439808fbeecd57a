//! Front end for the `curvcones` binary: report assembly, subcommands and the
//! reproduction suite.

pub mod commands;
pub mod error;
pub mod report;
pub mod verify;

pub use error::{CliError, CliResult, ExitCode};
pub use report::{render_markdown, Report};
