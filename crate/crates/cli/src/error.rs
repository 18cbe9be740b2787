use std::fmt;

/// A command failure, classified by exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    /// Unreadable or malformed input (exit 1).
    Input(String),
    /// Well-formed input that fails validation or a requested check (exit 2).
    Check(String),
    /// A theorem that must hold was observed to fail (exit 3).
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 1,
            CliError::Check(_) => 2,
            CliError::Internal(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Check(m) | CliError::Internal(m) => m,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.message())
    }
}

impl std::error::Error for CliError {}

impl From<spcls_core::Error> for CliError {
    fn from(e: spcls_core::Error) -> Self {
        if e.is_internal() {
            CliError::Internal(e.to_string())
        } else if e.is_validation() || matches!(e, spcls_core::Error::ExhaustiveCapExceeded { .. }) {
            CliError::Check(e.to_string())
        } else {
            CliError::Input(e.to_string())
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
