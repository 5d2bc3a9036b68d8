//! Experiment driver for `kksampling`: configuration files, the
//! `synthesize | verify | converge | reproduce | compare` subcommands and
//! their JSON/CSV outputs.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod output;
pub mod reference;

pub use commands::{run, CommandError, Report};
pub use config::{ConfigError, ExperimentConfig, Plan};

/// Process exit codes.
pub mod exit {
    pub const PASS: i32 = 0;
    pub const ERROR: i32 = 1;
    pub const ACCEPTANCE_FAILURE: i32 = 2;
}
