//! Library side of the `spcls` command: instance files, reports and commands.

pub mod analysis;
pub mod commands;
pub mod error;
pub mod format;
