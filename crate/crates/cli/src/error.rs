use std::fmt;

/// Process exit statuses.
pub mod exit {
    pub const USAGE: i32 = 2;
    pub const DATA: i32 = 3;
    pub const COMPUTATION: i32 = 4;
    pub const STRICT: i32 = 5;
}

#[derive(Debug)]
pub struct CliError {
    pub code: String,
    pub message: String,
    pub status: i32,
}

impl CliError {
    pub fn usage(code: &str, message: impl Into<String>) -> Self {
        CliError {
            code: code.to_string(),
            message: message.into(),
            status: exit::USAGE,
        }
    }

    pub fn data(code: &str, message: impl Into<String>) -> Self {
        CliError {
            code: code.to_string(),
            message: message.into(),
            status: exit::DATA,
        }
    }

    pub fn strict(message: impl Into<String>) -> Self {
        CliError {
            code: "strict_verdict".to_string(),
            message: message.into(),
            status: exit::STRICT,
        }
    }

    /// Prefixes the message with the command it came from.
    pub fn context(mut self, command: &str) -> Self {
        self.message = format!("{command}: {}", self.message);
        self
    }

    /// The single-line `error:<code>: message` form written to stderr.
    pub fn line(&self) -> String {
        let message = self.message.replace(['\n', '\r'], " ");
        format!("error:{}: {}", self.code, message)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.line())
    }
}

impl std::error::Error for CliError {}

impl From<stratmean::Error> for CliError {
    fn from(err: stratmean::Error) -> Self {
        CliError {
            code: err.code().to_string(),
            message: err.to_string(),
            status: if err.is_data_error() {
                exit::DATA
            } else {
                exit::COMPUTATION
            },
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::data("io_error", err.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
