use std::fmt;
use std::process::ExitCode;

/// Failure of a command, carrying its exit status.
#[derive(Debug)]
pub enum CliError {
    /// Malformed config, bad flag values, unreadable or unwritable files.
    Invalid(String),
    /// A root on the imaginary axis makes the requested quantity undefined.
    Degenerate(String),
    /// A checked property did not hold.
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Failed(_) => 1,
            CliError::Invalid(_) => 2,
            CliError::Degenerate(_) => 3,
        })
    }

    pub fn invalid(msg: impl Into<String>) -> Self {
        CliError::Invalid(msg.into())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Invalid(m) => write!(f, "invalid input: {m}"),
            CliError::Degenerate(m) => write!(f, "degenerate system: {m}"),
            CliError::Failed(m) => write!(f, "check failed: {m}"),
        }
    }
}

impl From<stealth_gain::Error> for CliError {
    fn from(e: stealth_gain::Error) -> Self {
        if e.is_degenerate() {
            CliError::Degenerate(e.to_string())
        } else {
            CliError::Invalid(e.to_string())
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Invalid(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
