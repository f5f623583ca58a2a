//! Command-line front end for the patchdyn simulator: resolve a run
//! configuration (file and/or flags), execute a command, and emit plain-text
//! data files for external plotting.

pub mod commands;
pub mod config;

use patchdyn::analysis::AnalysisError;
use patchdyn::coupling::CouplingError;
use patchdyn::dynamics::DynamicsError;
use patchdyn::mesh::LayoutError;
use patchdyn::model::ModelError;
use patchdyn::oracle::OracleError;
use thiserror::Error;

/// Exit status 1.
pub const EXIT_CONFIG: i32 = 1;
/// Exit status 2.
pub const EXIT_NUMERICAL: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => EXIT_CONFIG,
            CliError::Numerical(_) => EXIT_NUMERICAL,
        }
    }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<LayoutError> for CliError {
    fn from(e: LayoutError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<CouplingError> for CliError {
    fn from(e: CouplingError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<DynamicsError> for CliError {
    fn from(e: DynamicsError) -> Self {
        match e {
            DynamicsError::BlowUp { .. } | DynamicsError::NonFinite { .. } => {
                CliError::Numerical(e.to_string())
            }
            other => CliError::Config(other.to_string()),
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::FineGridBlowUp { .. }
            | OracleError::DenominatorUnderflow
            | OracleError::Quadrature(_) => CliError::Numerical(e.to_string()),
            other => CliError::Config(other.to_string()),
        }
    }
}

impl From<AnalysisError> for CliError {
    fn from(e: AnalysisError) -> Self {
        match e {
            AnalysisError::Oracle(o) => o.into(),
            AnalysisError::Dynamics(d) => d.into(),
            other => CliError::Config(other.to_string()),
        }
    }
}
