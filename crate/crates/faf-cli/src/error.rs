use finitary_af::AfError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },

    #[error("line {line}: undeclared argument `{name}`")]
    Undeclared { line: usize, name: String },

    #[error("line {line}: duplicate argument `{name}`")]
    Duplicate { line: usize, name: String },

    #[error(transparent)]
    Af(#[from] AfError),

    #[error("{0}")]
    Usage(String),

    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    /// 2 when a budget or cap ran out, 1 for bad input.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Af(e) if e.is_exhaustion() => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
