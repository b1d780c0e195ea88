use std::process::ExitCode;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error("numerical failure: {0}")]
    Numerical(softhop::Error),

    #[error("output error: {0}")]
    Io(#[from] std::io::Error),
}

impl From<softhop::Error> for CliError {
    fn from(e: softhop::Error) -> Self {
        match e {
            softhop::Error::InvalidParameter { .. } => CliError::Config(e.to_string()),
            other => CliError::Numerical(other),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Config(_) | CliError::Io(_) => ExitCode::from(2),
            CliError::Numerical(_) => ExitCode::from(3),
        }
    }
}
