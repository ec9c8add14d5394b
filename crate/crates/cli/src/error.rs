use thiserror::Error;

/// Failures that stop a run before any assertion is evaluated.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("input error: {0}")]
    Input(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl From<qeccov_core::Error> for CliError {
    fn from(e: qeccov_core::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

impl CliError {
    /// Process exit status for this error.
    pub fn exit_code(&self) -> i32 {
        2
    }
}
