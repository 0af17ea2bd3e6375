//! Seeded multi-run experiments: configuration, execution and result files.

pub mod config;
pub mod output;
mod runner;
pub mod seed;

pub use config::ExperimentConfig;
pub use output::write_results;
pub use runner::{
    config_hash, run_experiment, run_experiment_with, run_single, Execution, ExperimentResult,
    PolicyAggregates, PolicyResult, Provenance,
};
