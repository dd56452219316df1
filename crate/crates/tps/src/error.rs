use thiserror::Error;

/// Failures surfaced by the command line. The variant fixes the exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags or configuration. Exit code 2.
    #[error("{0}")]
    Usage(String),
    /// A singularity or another computation failure. Exit code 1.
    #[error("{0}")]
    Failure(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failure(_) => 1,
        }
    }
}

impl From<tps_core::Error> for CliError {
    fn from(e: tps_core::Error) -> Self {
        match e {
            tps_core::Error::InvalidInput(msg) => CliError::Usage(msg),
            tps_core::Error::DimensionMismatch { .. } => CliError::Usage(e.to_string()),
            other => CliError::Failure(other.to_string()),
        }
    }
}
