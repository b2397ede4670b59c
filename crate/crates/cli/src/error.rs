use std::fmt;

use zygops_core::Error as CoreError;

/// Process exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_ANALYSIS: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug)]
pub enum CliError {
    /// Unreadable, malformed or out-of-range configuration.
    Config(String),
    /// The analysis ran but its outcome was requested to be an error
    /// (an unbounded operator, a failing verification suite).
    Analysis(String),
    Core(CoreError),
    Io(std::io::Error),
}

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Analysis(_) => EXIT_ANALYSIS,
            CliError::Io(_) => EXIT_NUMERIC,
            CliError::Core(e) => match e {
                CoreError::Parse { .. }
                | CoreError::UnboundParameter(_)
                | CoreError::SelfMapViolation { .. }
                | CoreError::DegenerateParameter(_)
                | CoreError::UnsupportedCase(_)
                | CoreError::UnsupportedWeight(_)
                | CoreError::InvalidInput(_) => EXIT_CONFIG,
                CoreError::NotBounded => EXIT_ANALYSIS,
                CoreError::Domain(_) | CoreError::OrderTooLarge { .. } => EXIT_NUMERIC,
            },
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Analysis(m) => write!(f, "analysis failed: {m}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(std::io::Error::other(e))
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(std::io::Error::other(e))
    }
}

pub type CliResult<T> = Result<T, CliError>;
