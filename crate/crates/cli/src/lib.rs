//! Experiment plumbing for the `levymc` binary: configuration files, moment
//! experiments and the rate verification table.

pub mod config;
pub mod experiment;
pub mod output;
pub mod process_arg;

pub use config::{ConfigError, ExperimentConfig, GridSpec};
pub use experiment::{
    reference_table, run_experiment, run_verify, run_verify_cases, write_report, ExperimentFiles, RowStatus,
    Tolerances, VerifyCase, VerifyReport, VerifyRow,
};
