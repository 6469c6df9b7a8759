use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AfError {
    #[error("argument {index} out of range for a framework with {n_args} arguments")]
    OutOfRange { index: usize, n_args: usize },

    #[error("invalid input: {0}")]
    Input(String),

    #[error("{what}: limit {limit} exceeded")]
    Resource { what: &'static str, limit: usize },

    #[error("node budget of {budget} exhausted with {frontier} open nodes")]
    Budget { budget: usize, frontier: usize },
}

impl AfError {
    pub fn input(msg: impl Into<String>) -> Self {
        AfError::Input(msg.into())
    }

    /// Budget and resource errors mean "ran out", not "bad input".
    pub fn is_exhaustion(&self) -> bool {
        matches!(self, AfError::Resource { .. } | AfError::Budget { .. })
    }
}

pub type Result<T> = std::result::Result<T, AfError>;
