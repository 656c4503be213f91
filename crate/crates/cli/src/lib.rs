//! Library side of the `dynagraph` command-line tool: subcommand
//! implementations, layout, and SVG output. The binary in `main.rs` is a
//! thin argument-parsing wrapper over this crate.

pub mod commands;
pub mod error;
pub mod layout;
pub mod svg;

pub use error::CliError;
