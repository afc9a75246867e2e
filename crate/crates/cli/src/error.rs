use std::fmt;

use medtriage_core::analytics::AnalyticsError;
use medtriage_core::inference::TriageError;
use medtriage_core::knowledge::PackError;
use medtriage_core::temporal::{JournalError, StoreError};
use medtriage_core::tsql::TsqlError;
use medtriage_service::ApiError;

/// Exit status for domain errors (bad input, invalid pack, rejected query).
pub const EXIT_DOMAIN: u8 = 1;
/// Exit status for I/O failures.
pub const EXIT_IO: u8 = 2;

/// Printed as one line, `error: <kind>: <message>`.
#[derive(Debug)]
pub struct CliError {
    pub exit: u8,
    pub kind: &'static str,
    pub message: String,
}

impl CliError {
    pub fn domain(kind: &'static str, message: impl Into<String>) -> Self {
        CliError { exit: EXIT_DOMAIN, kind, message: message.into() }
    }

    pub fn io(message: impl Into<String>) -> Self {
        CliError { exit: EXIT_IO, kind: "io", message: message.into() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // keep the report on one line whatever the source message holds
        let message = self.message.split_whitespace().collect::<Vec<_>>().join(" ");
        write!(f, "error: {}: {message}", self.kind)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::io(e.to_string())
    }
}

impl From<ApiError> for CliError {
    fn from(e: ApiError) -> Self {
        CliError::domain(e.code, e.message)
    }
}

impl From<PackError> for CliError {
    fn from(e: PackError) -> Self {
        match e {
            PackError::Io { .. } => CliError::io(e.to_string()),
            _ => CliError::domain("invalid_pack", e.to_string()),
        }
    }
}

impl From<StoreError> for CliError {
    fn from(e: StoreError) -> Self {
        match e {
            StoreError::Journal(JournalError::Io { .. }) => CliError::io(e.to_string()),
            other => ApiError::from(other).into(),
        }
    }
}

impl From<TriageError> for CliError {
    fn from(e: TriageError) -> Self {
        match e {
            TriageError::Store(s) => s.into(),
            other => ApiError::from(other).into(),
        }
    }
}

impl From<TsqlError> for CliError {
    fn from(e: TsqlError) -> Self {
        match e {
            TsqlError::Eval(medtriage_core::tsql::EvalError::Store(s)) => s.into(),
            other => ApiError::from(other).into(),
        }
    }
}

impl From<AnalyticsError> for CliError {
    fn from(e: AnalyticsError) -> Self {
        CliError::domain("analytics", e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        if e.is_io_error() {
            CliError::io(e.to_string())
        } else {
            CliError::domain("invalid_csv", e.to_string())
        }
    }
}
