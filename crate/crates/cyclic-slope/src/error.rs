use std::path::PathBuf;

use cyclic_slope_core::bounds::BoundsError;
use cyclic_slope_core::cluster::ClusterError;
use cyclic_slope_core::examples::ExampleError;
use cyclic_slope_core::invariants::ModelError;
use cyclic_slope_core::resolution::ResolutionError;
use cyclic_slope_core::ParamError;

/// Everything a command can fail with, split by exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: invalid JSON at `{pointer}`: {message}")]
    Parse { path: PathBuf, pointer: String, message: String },
    #[error("cannot write output: {0}")]
    Write(std::io::Error),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("INTERNAL IDENTITY VIOLATION: {0}")]
    Identity(String),
}

impl CliError {
    /// 1 for bad input, 2 for a broken identity.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Identity(_) => 2,
            _ => 1,
        }
    }
}

fn resolution_is_identity(e: &ResolutionError) -> bool {
    matches!(
        e,
        ResolutionError::IdentityViolation(_)
            | ResolutionError::LedgerIncomplete(_)
            | ResolutionError::Cluster(ClusterError::IdentityViolation(_))
    )
}

impl From<ResolutionError> for CliError {
    fn from(e: ResolutionError) -> Self {
        if resolution_is_identity(&e) {
            CliError::Identity(e.to_string())
        } else {
            CliError::Invalid(e.to_string())
        }
    }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        let identity = match &e {
            ModelError::InconsistentModel(_) => true,
            ModelError::Resolution { error, .. } => resolution_is_identity(error),
            _ => false,
        };
        if identity {
            CliError::Identity(e.to_string())
        } else {
            CliError::Invalid(e.to_string())
        }
    }
}

impl From<ParamError> for CliError {
    fn from(e: ParamError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<BoundsError> for CliError {
    fn from(e: BoundsError) -> Self {
        match e {
            BoundsError::Model(m) => m.into(),
            other => CliError::Invalid(other.to_string()),
        }
    }
}

impl From<ExampleError> for CliError {
    fn from(e: ExampleError) -> Self {
        match e {
            ExampleError::NotSharp { .. } => CliError::Identity(e.to_string()),
            other => CliError::Invalid(other.to_string()),
        }
    }
}
