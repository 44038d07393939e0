use std::io;
use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] sccc::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("oracle mismatch: {0}")]
    OracleMismatch(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type CliResult<T> = Result<T, CliError>;

impl CliError {
    /// 2 for configuration errors, 3 for cap or feasibility limits, 4 otherwise.
    pub fn exit_code(&self) -> u8 {
        use sccc::Error as E;
        match self {
            CliError::Config(_) => 2,
            CliError::Core(e) => match e {
                E::CapExceeded(_) | E::InfeasiblePermeability(_) | E::TooLarge(_) => 3,
                E::Internal(_) | E::ShapeMismatch(..) => 4,
                _ => 2,
            },
            CliError::Io { .. } | CliError::OracleMismatch(_) | CliError::Internal(_) => 4,
        }
    }
}
