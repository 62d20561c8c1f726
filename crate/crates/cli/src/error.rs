use std::fmt;

use hogeom_core::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Config,
    Numerical,
    Io,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub kind: Kind,
    pub message: String,
}

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        CliError { kind: Kind::Config, message: msg.into() }
    }

    pub fn numerical(msg: impl Into<String>) -> Self {
        CliError { kind: Kind::Numerical, message: msg.into() }
    }

    pub fn exit_code(&self) -> i32 {
        match self.kind {
            Kind::Config | Kind::Io => 2,
            Kind::Numerical => 3,
        }
    }

    /// Machine-readable form for stderr.
    pub fn to_json(&self) -> String {
        let kind = match self.kind {
            Kind::Config => "config",
            Kind::Numerical => "numerical",
            Kind::Io => "io",
        };
        serde_json::json!({ "error": { "kind": kind, "message": self.message } }).to_string()
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::RankUnsupported { .. }
            | Error::DimensionMismatch { .. }
            | Error::LongMultiplicityNotOne
            | Error::NotRepresentable
            | Error::DegreeTooLarge { .. }
            | Error::TableTooLarge => CliError::config(e.to_string()),
            _ => CliError::numerical(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError { kind: Kind::Io, message: e.to_string() }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError { kind: Kind::Io, message: e.to_string() }
    }
}
