//! Experiment runner for the `qedsim` repetition-code simulator.
//!
//! Each subcommand resolves a versioned TOML configuration, computes its
//! tables, and writes them as CSV next to a `manifest.json` that records
//! the configuration, its hash, the seed and a sha256 per file.

use std::path::Path;

pub mod config;
pub mod experiments;
pub mod output;

pub use config::{Experiment, ExperimentConfig, Overrides};
pub use output::{verify, Manifest, RunOutput};

/// Failures, each with its process exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("physicality check failed: {0}")]
    Physicality(String),
    #[error("verification failed: {0}")]
    Verify(String),
    #[error("simulation error: {0}")]
    Simulation(qedsim::Error),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Physicality(_) => 3,
            CliError::Verify(_) | CliError::Simulation(_) | CliError::Io(_) => 1,
        }
    }
}

impl From<qedsim::Error> for CliError {
    fn from(e: qedsim::Error) -> Self {
        use qedsim::Error as E;
        match e {
            E::Unphysical(_)
            | E::NotTracePreserving { .. }
            | E::NotNormalized { .. }
            | E::NotHermitian { .. } => CliError::Physicality(e.to_string()),
            E::InvalidCoherence { .. } | E::InvalidReadout(_) | E::InvalidProbability(_) => {
                CliError::Config(e.to_string())
            }
            other => CliError::Simulation(other),
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

/// Computes the tables for `experiment` without touching the disk.
pub fn compute(experiment: Experiment, cfg: &ExperimentConfig) -> Result<RunOutput, CliError> {
    Ok(match experiment {
        Experiment::ParityCheck => output::parity_tables(&experiments::parity_check(cfg)?),
        Experiment::Entangle => output::entangle_tables(&experiments::entangle(cfg)?),
        Experiment::QedSweep => output::sweep_tables(&experiments::qed_sweep(cfg)?),
        Experiment::ErrorTable => output::table_tables(&experiments::error_table(cfg)?),
    })
}

/// Runs `experiment` and writes its tables and manifest into `dir`.
pub fn run(
    experiment: Experiment,
    cfg: &ExperimentConfig,
    dir: &Path,
) -> Result<Manifest, CliError> {
    let out = compute(experiment, cfg)?;
    let manifest = Manifest::new(experiment, cfg, &out)?;
    output::write_run(dir, &out, &manifest)?;
    Ok(manifest)
}
