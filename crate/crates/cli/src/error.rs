use std::fmt;

use hisgraph::Error;

pub const EXIT_USAGE: i32 = 1;
pub const EXIT_IO: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    pub fn io(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_IO,
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::InvalidParameter(_) => EXIT_USAGE,
            Error::Io { .. }
            | Error::Parse { .. }
            | Error::Csv { .. }
            | Error::Json(_)
            | Error::EmptyGraph
            | Error::Dimension { .. }
            | Error::NodeOutOfRange { .. } => EXIT_IO,
            _ => EXIT_NUMERIC,
        };
        let message = match &e {
            Error::Io { path, source } if source.kind() == std::io::ErrorKind::NotFound => {
                format!("{}: file not found", path.display())
            }
            _ => e.to_string(),
        };
        Self { code, message }
    }
}

pub type CliResult<T> = Result<T, CliError>;
