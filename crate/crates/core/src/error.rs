use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid sample: {0}")]
    InvalidSample(String),

    #[error("{}:{line}: {message}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("missing required file {}", .0.display())]
    MissingFile(PathBuf),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("infeasible sample spec: {0}")]
    InfeasibleSpec(String),

    #[error("exact coloring infeasible: graph {index} has {nodes} nodes (limit {limit})")]
    ExactColoringInfeasible {
        index: usize,
        nodes: usize,
        limit: usize,
    },

    #[error("enumeration infeasible: m = {m} exceeds limit {limit}")]
    EnumerationInfeasible { m: usize, limit: usize },

    #[error("sample size mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },

    #[error("uniform partitioning violated: p = {p} does not divide m = {m}")]
    NonUniformPartition { p: usize, m: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(path: impl Into<PathBuf>, line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            line,
            message: message.into(),
        }
    }
}
