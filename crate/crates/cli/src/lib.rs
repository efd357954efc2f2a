//! Library half of the batch front end: run configuration, the shared
//! data pipeline, and the four commands (prepare, train, evaluate,
//! compare). The binary in main.rs is a thin argument-parsing shell.

pub mod commands;
pub mod config;
pub mod pipeline;

use thiserror::Error;

/// Errors classified by exit code: usage/config problems exit 1, data
/// problems exit 2, numerical failures exit 3.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Data(String),
    #[error("{0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl From<bondbench_core::data::DataError> for CliError {
    fn from(e: bondbench_core::data::DataError) -> Self {
        use bondbench_core::data::DataError::*;
        match e {
            Config(_) | InfeasibleQuota { .. } => CliError::Usage(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl From<bondbench_core::cmodels::CmodelError> for CliError {
    fn from(e: bondbench_core::cmodels::CmodelError) -> Self {
        use bondbench_core::cmodels::CmodelError::*;
        match e {
            Config(_) | Shape(_) => CliError::Usage(e.to_string()),
            Divergence { .. } => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<bondbench_core::qmodels::QmodelError> for CliError {
    fn from(e: bondbench_core::qmodels::QmodelError) -> Self {
        use bondbench_core::qmodels::QmodelError::*;
        match e {
            Shape(_) | Circuit(_) => CliError::Usage(e.to_string()),
            Sim(_) | Optim(_) => CliError::Numerical(e.to_string()),
            Svr(inner) => bondbench_core::cmodels::CmodelError::into(inner),
        }
    }
}

impl From<bondbench_core::metrics::MetricsError> for CliError {
    fn from(e: bondbench_core::metrics::MetricsError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<bondbench_core::model::ModelError> for CliError {
    fn from(e: bondbench_core::model::ModelError) -> Self {
        use bondbench_core::model::ModelError::*;
        match e {
            Prediction(_) => CliError::Numerical(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Data(e.to_string())
    }
}

/// Write a file atomically: temp file in the same directory, then rename.
pub fn atomic_write(path: &std::path::Path, contents: &str) -> Result<(), CliError> {
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, contents)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}
