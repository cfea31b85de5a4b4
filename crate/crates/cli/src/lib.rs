//! Command-line front end for the labeling, training and GA comparison pipeline.

pub mod commands;
pub mod config;

pub use commands::{cmd_compare, cmd_eval, cmd_label, cmd_roc, cmd_synth, cmd_train};
pub use config::RunConfig;
