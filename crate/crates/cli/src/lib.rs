//! Command-line front end: instance and suite generation, solver runs,
//! benchmark CSV tables and SVG rendering.

pub mod bench;
pub mod commands;
pub mod record;
pub mod render;

use std::fmt;

use multicover::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

/// A failure with the process exit code it maps to.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    pub fn io(message: impl Into<String>) -> Self {
        CliError {
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

impl std::error::Error for CliError {}

/// Bad arguments are usage errors; unreadable, malformed or mismatched input
/// files are I/O errors; anything else is internal.
impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidArgument(_) | Error::UnknownFamily(_) => EXIT_USAGE,
            Error::Io { .. } | Error::Json(_) | Error::Parse { .. } | Error::Validation { .. } | Error::RowViolation { .. } => {
                EXIT_IO
            }
            _ => EXIT_INTERNAL,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
