//! File formats, subcommands and SVG rendering behind the `specbox` binary.

pub mod bundle;
pub mod commands;
pub mod error;
pub mod problem;
pub mod svg;

pub use bundle::ResultBundle;
pub use error::{CliError, CliResult};
pub use problem::ProblemFile;
