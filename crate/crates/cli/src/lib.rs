//! Library surface of the `bandlimit` CLI: experiment configuration and the
//! seeded Monte-Carlo runners, exposed so integration tests can drive them
//! in-process.

pub mod config;
pub mod experiments;

pub use config::{ConfigError, ExperimentConfig, ExperimentKind, MSpec, NoiseSpec, Scheme};
pub use experiments::{
    run_experiment, run_real_data_experiment, run_sampling_experiment, run_support_experiment,
    write_results, ResultRow, ResultTable, RunError,
};
