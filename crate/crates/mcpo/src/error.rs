use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("invalid scenario: {0}")]
    Validation(String),
    #[error("infeasible scenario: {0}")]
    Infeasible(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl PipelineError {
    /// Process exit status for the CLI.
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Parse { .. } | PipelineError::Validation(_) => 2,
            PipelineError::Infeasible(_) => 3,
            PipelineError::Io { .. } => 4,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        PipelineError::Io {
            path: path.into(),
            source,
        }
    }
}

impl From<mcpo_core::Error> for PipelineError {
    fn from(e: mcpo_core::Error) -> Self {
        match e {
            mcpo_core::Error::InfeasiblePiece { id } => {
                PipelineError::Infeasible(format!("piece {id} fits no stock panel under the transform policy"))
            }
            other => PipelineError::Validation(other.to_string()),
        }
    }
}

pub type Result<T, E = PipelineError> = std::result::Result<T, E>;
