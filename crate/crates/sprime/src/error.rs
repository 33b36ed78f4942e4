use sprime_core::Error as CoreError;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const VERIFICATION_FAILED: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const CONSISTENCY: i32 = 3;
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("internal consistency error: {0}")]
    Consistency(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) | Self::Io(_) => exit::USAGE,
            Self::Verification(_) => exit::VERIFICATION_FAILED,
            Self::Consistency(_) => exit::CONSISTENCY,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::Consistency(_) => Self::Consistency(e.to_string()),
            CoreError::Tolerance(_) => Self::Verification(e.to_string()),
            _ => Self::Usage(e.to_string()),
        }
    }
}
