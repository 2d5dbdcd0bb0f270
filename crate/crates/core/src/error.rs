use std::path::PathBuf;

use crate::Time;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Task and worker ids carried by errors are 0-based; messages print them
/// 1-based to match the file format.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("precedence cycle through task {}", .0 + 1)]
    PrecedenceCycle(usize),

    #[error("task {} has no capable worker", .0 + 1)]
    NoCapableWorker(usize),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("cycle time {0} proven infeasible")]
    CycleInfeasible(Time),

    #[error("infeasible at cycle time {0}")]
    InfeasibleAt(Time),

    #[error("no feasible assignment exists up to cycle time {0}")]
    NoFeasibleAssignment(Time),

    #[error("cannot mark {wanted} infeasible cells without leaving a task uncovered")]
    DensityInfeasible { wanted: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
