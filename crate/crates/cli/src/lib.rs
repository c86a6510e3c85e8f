//! Library side of the `nagd` command-line tool: TOML experiment configs,
//! CSV/JSON writers, the built-in reference experiments and the
//! `classify`, `simulate`, `reproduce`, `sweep` and `check` commands.

pub mod commands;
pub mod config;
pub mod error;
pub mod figures;
pub mod metrics;
pub mod output;
pub mod run;

pub use config::ExperimentConfig;
pub use error::{CliError, Status};
