//! File format, report rendering and subcommands of the `avgcoh` tool.

pub mod commands;
pub mod format;
pub mod render;
