//! Command-line and HTTP front ends for the `cl18` library.

pub mod api;
mod commands;
pub mod session;

pub use commands::{run_cli, run_with_io};
