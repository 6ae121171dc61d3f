use std::fmt;

use serde_json::json;

/// Failure of a run, mapped onto the process exit status.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),

    #[error(transparent)]
    Numerical(loggas_core::Error),

    #[error("{path}: {message}")]
    Io { path: String, message: String },

    #[error("{failed} of {total} checks failed")]
    CheckFailed { failed: usize, total: usize },
}

impl CliError {
    pub fn config(message: impl fmt::Display) -> Self {
        CliError::Config(message.to_string())
    }

    pub fn io(path: &std::path::Path, err: impl fmt::Display) -> Self {
        CliError::Io { path: path.display().to_string(), message: err.to_string() }
    }

    /// 2 config, 3 numerical, 4 check failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io { .. } => 2,
            CliError::Numerical(_) => 3,
            CliError::CheckFailed { .. } => 4,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Io { .. } => "io",
            CliError::Numerical(_) => "numerical",
            CliError::CheckFailed { .. } => "check",
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "error": self.kind(),
            "message": self.to_string(),
            "exit_code": self.exit_code(),
        })
    }
}

impl From<loggas_core::Error> for CliError {
    fn from(e: loggas_core::Error) -> Self {
        use loggas_core::Error as E;
        match e {
            E::ParameterDomain(_)
            | E::UnknownMap(_)
            | E::UnknownPotential(_)
            | E::UnsupportedBeta(_)
            | E::UnsupportedPotential(_)
            | E::InvalidInput(_)
            | E::OutOfInterval(_)
            | E::OutsideDomain { .. } => CliError::Config(e.to_string()),
            other => CliError::Numerical(other),
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
