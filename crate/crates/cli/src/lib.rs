//! Config-driven experiment runner for the `proxcert` certifier.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod error;

pub use commands::{
    cmd_pl_compare, cmd_run, cmd_tightness, pl_compare, PlComparison, RunOptions, RunOutcome,
    TightnessTable,
};
pub use error::CliError;
