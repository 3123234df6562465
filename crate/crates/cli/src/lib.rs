//! Command implementations and report types behind the `symbranch` binary.

pub mod commands;
pub mod report;
