use std::path::PathBuf;

use crate::game::{Move, Position};

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("illegal move {mv} from {pos}")]
    IllegalMove { pos: Position, mv: Move },

    #[error("no legal moves from terminal position")]
    TerminalState,

    #[error("position {pos} outside {rows}x{cols} board")]
    OutOfBounds { pos: Position, rows: usize, cols: usize },

    #[error("board of {cells} cells exceeds the limit of {limit}")]
    ResourceLimit { cells: u64, limit: u64 },

    #[error("no state passed the hot/cold thresholds")]
    EmptyDataset,

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("{path}: {msg}")]
    File { path: PathBuf, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn file(path: impl Into<PathBuf>, msg: impl ToString) -> Self {
        Error::File {
            path: path.into(),
            msg: msg.to_string(),
        }
    }

    /// Process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) => 2,
            Error::ResourceLimit { .. } => 3,
            Error::Numerical(_) => 4,
            _ => 1,
        }
    }
}
