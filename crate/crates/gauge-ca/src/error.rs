use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A value failed validation: bad literal, mismatched dimensions, unknown name.
    #[error("{0}")]
    InvalidArgument(String),

    /// An exhaustive computation would exceed the configured case bound.
    #[error("resource limit exceeded: {needed} cases over bound of {bound}")]
    ResourceLimit { needed: u128, bound: u128 },

    /// A scenario file failed to parse. `line` is 1-based; 0 means the error
    /// is not tied to a single line.
    #[error("line {line}: {field}: {message}")]
    Parse {
        line: usize,
        field: String,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn invalid(message: impl Into<String>) -> Error {
        Error::InvalidArgument(message.into())
    }
}
