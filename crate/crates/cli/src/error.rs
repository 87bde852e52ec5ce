use std::fmt;

/// A failed command together with its exit status.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, bad configuration, or an occupied output directory.
    Usage(String),
    /// Unknown problem, or an operation the problem does not support.
    Problem(String),
    Runtime(anyhow::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Problem(_) => 3,
            CliError::Runtime(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "invalid invocation: {m}"),
            CliError::Problem(m) => write!(f, "problem error: {m}"),
            CliError::Runtime(e) => write!(f, "run failed: {e:#}"),
        }
    }
}

impl From<domsearch::Error> for CliError {
    fn from(e: domsearch::Error) -> Self {
        use domsearch::Error as E;
        match e {
            E::NotFound(name) => CliError::Problem(format!("unknown problem `{name}`")),
            E::Unsupported(m) => CliError::Problem(m),
            E::InvalidArgument(m) => CliError::Usage(m),
            other => CliError::Runtime(other.into()),
        }
    }
}

impl From<anyhow::Error> for CliError {
    fn from(e: anyhow::Error) -> Self {
        CliError::Runtime(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.into())
    }
}

pub type CliResult<T> = Result<T, CliError>;
