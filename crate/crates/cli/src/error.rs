use std::fmt;

use royroot::Error;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, files or scenario parameters (exit 2).
    Validation(String),
    /// A computation failed (exit 3).
    Numerical(String),
    /// `check` found a failing suite (exit 1).
    CheckFailed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::CheckFailed(_) => 1,
            CliError::Validation(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(m) => write!(f, "invalid input: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
            CliError::CheckFailed(m) => write!(f, "check failed: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Convergence { .. }
            | Error::Bracketing(_)
            | Error::EigenCrossing { .. }
            | Error::Unattainable { .. } => CliError::Numerical(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}
