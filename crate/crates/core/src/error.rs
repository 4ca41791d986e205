use thiserror::Error;

/// Errors raised by ingestion, the walk-counting backends and the CLI.
#[derive(Debug, Error)]
pub enum TwcError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("walk counts diverge: {0}")]
    Divergence(String),

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("result universes differ: {0}")]
    UniverseMismatch(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl TwcError {
    /// Process exit code used by the CLI: 1 = usage, 2 = input, 3 = numerical/capacity.
    pub fn exit_code(&self) -> i32 {
        match self {
            TwcError::Config(_) => 1,
            TwcError::Parse { .. } | TwcError::Io(_) | TwcError::UniverseMismatch(_) => 2,
            TwcError::Contract(_) | TwcError::Divergence(_) | TwcError::Capacity(_) => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, TwcError>;
