use std::io;

use thiserror::Error;

/// Error type shared by every module in the crate.
///
/// The CLI maps variants to exit codes: configuration problems exit with 2,
/// everything else (bad data, I/O) exits with 1.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("empty dataset")]
    EmptyDataset,

    #[error("input error: {0}")]
    Input(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Exit code the CLI uses for this error.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Config(_) => 2,
            _ => 1,
        }
    }
}
