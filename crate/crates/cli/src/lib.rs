//! Command implementations behind the `colorbound` binary.
//!
//! Each command returns a serializable report; [`output`] renders it as JSON
//! or CSV. Failures carry the process exit code in [`CliError::exit_code`].

pub mod args;
pub mod commands;
pub mod output;
pub mod svg;

use std::path::Path;

use colorbound::graph::{parse_jsonl, parse_tu_dataset};
use colorbound::{Error as CoreError, GraphSample};
use thiserror::Error;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    InfeasibleColoring(String),
    #[error("{0}")]
    SizeMismatch(String),
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error("missing labels: {0}")]
    MissingLabels(String),
    #[error("{0}")]
    Other(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::InfeasibleColoring(_) => 3,
            CliError::SizeMismatch(_) => 4,
            CliError::InvariantViolation(_) => 5,
            CliError::MissingLabels(_) => 6,
            CliError::Other(_) => 1,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        let msg = e.to_string();
        match e {
            CoreError::Parse { .. }
            | CoreError::MissingFile(_)
            | CoreError::InvalidGraph(_)
            | CoreError::InvalidSample(_)
            | CoreError::InfeasibleSpec(_)
            | CoreError::InvalidArgument(_) => CliError::Parse(msg),
            CoreError::ExactColoringInfeasible { .. } => CliError::InfeasibleColoring(msg),
            CoreError::SizeMismatch { .. } => CliError::SizeMismatch(msg),
            _ => CliError::Other(msg),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// A dataset read from disk plus any loader warnings.
#[derive(Debug, Clone)]
pub struct LoadedSample {
    pub sample: GraphSample,
    pub warnings: Vec<String>,
}

/// Reads a TU-format directory or a JSONL file.
pub fn load_sample(path: &Path) -> CliResult<LoadedSample> {
    if path.is_dir() {
        let ds = parse_tu_dataset(path)?;
        Ok(LoadedSample {
            sample: ds.sample,
            warnings: ds.warnings,
        })
    } else if path.exists() {
        Ok(LoadedSample {
            sample: parse_jsonl(path)?,
            warnings: Vec::new(),
        })
    } else {
        Err(CliError::Parse(format!("{}: no such file or directory", path.display())))
    }
}
