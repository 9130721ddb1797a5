use alloc::string::String;

/// Errors raised by the core library.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid system shape: {0}")]
    InvalidShape(String),
    #[error("invalid basis label: {0}")]
    InvalidLabel(String),
    #[error("invalid bipartition: {0}")]
    InvalidBipartition(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("shape mismatch: expected (n={expected_n}, d={expected_d}), got (n={n}, d={d})")]
    ShapeMismatch {
        expected_n: usize,
        expected_d: usize,
        n: usize,
        d: usize,
    },
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("size guard exceeded: {0}")]
    TooLarge(String),
    #[error("unsupported input: {0}")]
    Unsupported(String),
}

pub type Result<T> = core::result::Result<T, Error>;
