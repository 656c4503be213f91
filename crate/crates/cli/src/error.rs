//! Command errors mapped onto process exit codes: 1 usage, 2 bad input,
//! 3 violated runtime invariant.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Invariant(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Input(_) => 2,
            CliError::Invariant(_) => 3,
        }
    }
}

impl From<dynagraph::dgs::DgsError> for CliError {
    fn from(error: dynagraph::dgs::DgsError) -> Self {
        CliError::Input(error.to_string())
    }
}

impl From<dynagraph::GraphError> for CliError {
    fn from(error: dynagraph::GraphError) -> Self {
        CliError::Input(error.to_string())
    }
}

impl From<dynagraph::AlgoError> for CliError {
    fn from(error: dynagraph::AlgoError) -> Self {
        CliError::Invariant(error.to_string())
    }
}

impl From<dynagraph::generate::GeneratorError> for CliError {
    fn from(error: dynagraph::generate::GeneratorError) -> Self {
        CliError::Usage(error.to_string())
    }
}

impl From<dynagraph::mobility::MobilityError> for CliError {
    fn from(error: dynagraph::mobility::MobilityError) -> Self {
        CliError::Usage(error.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(error: std::io::Error) -> Self {
        CliError::Input(format!("i/o error: {error}"))
    }
}
