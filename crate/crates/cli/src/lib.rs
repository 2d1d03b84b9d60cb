//! File formats, SVG rendering, the verification report and the
//! subcommands behind the `flipgap` binary.

pub mod commands;
pub mod format;
pub mod render;
pub mod report;

pub use commands::{run, Cli, CliError};
