use thiserror::Error;

/// Exit code for invalid arguments.
pub const EXIT_ARGUMENT: i32 = 2;
/// Exit code for unreadable or malformed data and files.
pub const EXIT_DATA: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Argument(String),

    #[error("{0}")]
    Data(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Argument(_) => EXIT_ARGUMENT,
            CliError::Data(_) => EXIT_DATA,
        }
    }
}

impl From<oddkit_core::Error> for CliError {
    fn from(e: oddkit_core::Error) -> Self {
        if e.is_argument_error() {
            CliError::Argument(e.to_string())
        } else {
            CliError::Data(e.to_string())
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Data(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
