use std::fmt;
use std::io;
use std::path::Path;

use morphkit::dictfmt::ParseError;
use morphkit::{AnalyzeError, ConfigError, DictError};

pub const USAGE: u8 = 1;
pub const DATA: u8 = 2;
pub const IO: u8 = 3;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(String),
    Io(String),
    /// stdout was closed by the reader; not reported.
    BrokenPipe,
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => USAGE,
            CliError::Data(_) => DATA,
            CliError::Io(_) => IO,
            CliError::BrokenPipe => 0,
        }
    }

    pub fn io(path: &Path, err: io::Error) -> Self {
        CliError::Io(format!("{}: {err}", path.display()))
    }

    pub fn dict(path: &Path, err: DictError) -> Self {
        match err {
            DictError::Io { source, .. } => CliError::io(path, source),
            other => CliError::Data(format!("{}: {other}", path.display())),
        }
    }

    pub fn parse(path: &Path, err: ParseError) -> Self {
        match err {
            ParseError::Io { line, source } => {
                CliError::Io(format!("{}:{line}: {source}", path.display()))
            }
            ParseError::Syntax { line, kind } => {
                CliError::Data(format!("{}:{line}: {kind}", path.display()))
            }
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}\nTry 'morphkit --help' for more information."),
            CliError::Data(m) | CliError::Io(m) => f.write_str(m),
            CliError::BrokenPipe => f.write_str("broken pipe"),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(err: io::Error) -> Self {
        if err.kind() == io::ErrorKind::BrokenPipe {
            CliError::BrokenPipe
        } else {
            CliError::Io(err.to_string())
        }
    }
}

impl From<AnalyzeError> for CliError {
    fn from(err: AnalyzeError) -> Self {
        CliError::Data(err.to_string())
    }
}

impl From<ConfigError> for CliError {
    fn from(err: ConfigError) -> Self {
        CliError::Data(err.to_string())
    }
}
