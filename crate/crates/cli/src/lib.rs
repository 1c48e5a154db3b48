//! Command implementations for the `regulus` binary.

pub mod commands;
pub mod report;
pub mod verify;
