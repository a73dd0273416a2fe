use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// `line` is 1-based; 0 means the file as a whole.
    #[error("config{}: {msg}", if *line > 0 { format!(" line {line}") } else { String::new() })]
    Config { line: usize, msg: String },
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {msg}")]
    Data { path: PathBuf, msg: String },
    #[error(transparent)]
    Core(#[from] qdeconv_core::Error),
    #[error("{0}")]
    Invariant(String),
}

impl CliError {
    /// 1 for numerical or invariant failures, 2 for anything the user can fix
    /// in the command line, config or input files.
    pub fn exit_code(&self) -> u8 {
        use qdeconv_core::Error as E;
        match self {
            CliError::Invariant(_) => 1,
            CliError::Core(e) => match e {
                E::InvalidDimension(_)
                | E::InvalidState(_)
                | E::InvalidChannel(_)
                | E::InvalidParameter(_)
                | E::WrongMetric { .. } => 2,
                _ => 1,
            },
            _ => 2,
        }
    }
}
