//! Library side of the `faf` command: APX ingestion, gadget parameters and
//! the four subcommands, each rendering to a string plus an exit status.

pub mod apx;
pub mod commands;
pub mod error;
pub mod gadgets;

pub use apx::{emit_apx, parse_apx, ApxDocument};
pub use commands::*;
pub use error::{CliError, Result};
