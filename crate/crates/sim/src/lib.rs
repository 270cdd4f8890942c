//! Experiment runner for the drone base station simulator: configuration
//! files, `run` / `sweep` / `compare` orchestration, and CSV artifacts.

pub mod cli;
pub mod config_file;
pub mod error;
pub mod experiment;
pub mod format;

pub use config_file::{parse_config, render_config, ConfigFileError};
pub use error::SimError;
pub use experiment::{cmd_compare, cmd_run, cmd_sweep, ExperimentSpec, Verdict};
