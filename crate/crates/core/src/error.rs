use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error{}: {msg}", line.map(|l| format!(" at line {l}")).unwrap_or_default())]
    Parse { line: Option<usize>, msg: String },

    #[error("q[{i}][{j}] + q[{j}][{i}] deviates from 1 by {deviation:e}")]
    Asymmetry { i: usize, j: usize, deviation: f64 },

    #[error("q[{i}][{j}] = {value} lies outside [0, 1]")]
    Range { i: usize, j: usize, value: f64 },

    #[error("ballot set is empty")]
    EmptyBallots,

    #[error("preference matrix has no Condorcet winner")]
    NoCondorcetWinner,

    #[error("invalid size: {0}")]
    InvalidSize(String),

    #[error("communication graph is disconnected")]
    Disconnected,

    #[error("exact clique analytics limited to {limit} players (got {m}); use the greedy bound")]
    TooLargeForExact { m: usize, limit: usize },

    #[error("alpha = {alpha} outside the admissible range ({requirement})")]
    BadAlpha { alpha: f64, requirement: &'static str },

    #[error("player {recipient} already collected round {round}")]
    DoubleCollect { recipient: usize, round: u64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn parse(line: impl Into<Option<usize>>, msg: impl Into<String>) -> Self {
        Error::Parse {
            line: line.into(),
            msg: msg.into(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code used by the CLI: 1 for usage/configuration problems,
    /// 2 for data problems.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::BadAlpha { .. } | Error::InvalidSize(_) => 1,
            _ => 2,
        }
    }
}
