//! Crate-wide error type and exit-code mapping.

use std::path::PathBuf;

/// Errors produced anywhere in the laboratory.
#[derive(Debug, thiserror::Error)]
pub enum FalabError {
    /// A caller violated an operation precondition (bad shape, range, NaN...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Training or adaptation produced a non-finite loss.
    #[error("diverged: non-finite loss at epoch {epoch}")]
    Diverged { epoch: usize },

    /// A theory verifier was asked to certify something its assumption forbids.
    #[error("assumption violated: {0}")]
    AssumptionViolated(String),

    /// The simplex grid is too coarse to certify a brute-force minimum.
    #[error("grid resolution too coarse to certify: risks moved {delta:.3e} on refinement (tolerance {tolerance:.1e})")]
    ResolutionTooCoarse { delta: f64, tolerance: f64 },

    /// A dataset or checkpoint file failed to parse.
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: u64, message: String },

    /// A container has a version this build does not understand.
    #[error("unsupported file version {found} (expected {expected})")]
    UnsupportedVersion { found: u32, expected: u32 },

    /// A referenced input file does not exist.
    #[error("missing file: {0}")]
    MissingFile(PathBuf),

    /// The experiment configuration failed validation.
    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, FalabError>;

impl FalabError {
    pub fn invalid(msg: impl Into<String>) -> Self {
        FalabError::InvalidInput(msg.into())
    }

    /// Process exit code for the CLI: 0 success, 2 config, 3 diverged,
    /// 4 assumption-violated, 1 anything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            FalabError::Config(_) => 2,
            FalabError::Diverged { .. } => 3,
            FalabError::AssumptionViolated(_) => 4,
            _ => 1,
        }
    }
}
