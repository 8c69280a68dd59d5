//! Experiment configuration, runners, result tables and the command line.

pub mod cli;
pub mod config;
pub mod runners;
pub mod table;

pub use cli::cli_main;
pub use config::{ChannelSource, ExperimentConfig, OutputFormat};
pub use runners::{
    mean_suppression_curve, run_partition_compare, run_rate_curve, run_suppression_curve, run_users_sweep,
    self_interference_realizations, synthesize_trace, Experiment,
};
pub use table::{Cell, Table};
