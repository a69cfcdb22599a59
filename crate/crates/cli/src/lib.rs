//! Experiment harness behind the `hmala` binary: configuration handling,
//! seeded parallel chain sweeps, proposal clouds, and CSV/SVG output.
//!
//! Everything the binary does lives here so the experiments can also be
//! driven programmatically (the integration tests do exactly that).

pub mod cloud;
pub mod config;
pub mod output;
pub mod plot;
pub mod runchain;
pub mod seeding;
pub mod simulate;
pub mod sweep;
pub mod target_spec;

use std::process::ExitCode;
use thiserror::Error;

/// Errors split by exit code: configuration and validation problems exit
/// with 1, runtime failures with 2.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }

    pub fn runtime(msg: impl Into<String>) -> Self {
        CliError::Runtime(msg.into())
    }

    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Config(_) => ExitCode::from(1),
            CliError::Runtime(_) => ExitCode::from(2),
        }
    }

    /// Wraps an IO error with the path it concerned.
    pub fn io(path: &std::path::Path, err: std::io::Error) -> Self {
        CliError::Runtime(format!("{}: {err}", path.display()))
    }
}

impl From<hmala::targets::TargetError> for CliError {
    fn from(e: hmala::targets::TargetError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<hmala::samplers::SamplerError> for CliError {
    fn from(e: hmala::samplers::SamplerError) -> Self {
        CliError::Config(e.to_string())
    }
}
