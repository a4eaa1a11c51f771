//! Config-driven experiment runner for the `dsmap` imaging library.

pub mod config;
pub mod error;
pub mod output;
pub mod runner;
pub mod selftest;

pub use config::{ConfigError, ExperimentConfig};
pub use error::{categorize, Category};
pub use output::{encode_pgm, write_pgm};
pub use runner::{run_experiment, Report};
