use std::fmt;
use std::process::ExitCode;

/// `Usage` covers bad flags, unreadable or malformed input; `Domain` covers
/// inputs that are well formed but fail a mathematical check.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Usage(_) => ExitCode::from(2),
            CliError::Domain(_) => ExitCode::from(1),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Domain(m) => write!(f, "{m}"),
        }
    }
}

pub fn domain(e: stieltjes_cf::Error) -> CliError {
    CliError::Domain(e.to_string())
}

pub fn usage(e: stieltjes_cf::Error) -> CliError {
    CliError::Usage(e.to_string())
}
