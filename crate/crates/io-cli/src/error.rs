//! CLI error type with process exit-code semantics.

use thiserror::Error;

/// Exit code for malformed invocations.
pub const EXIT_USAGE: i32 = 1;
/// Exit code for unreadable, unwritable or malformed data.
pub const EXIT_DATA: i32 = 2;
/// Exit code for runs that finish without reaching their goal: an
/// unconverged driver loop, an infeasible vertex solve, or an empty mesh.
pub const EXIT_NONCONVERGENCE: i32 = 3;

/// Anything the command line surface can fail with.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags or flag combinations not caught by the parser itself.
    #[error("usage: {0}")]
    Usage(String),
    /// Unreadable, unwritable or malformed input/output data.
    #[error("{0}")]
    Data(String),
    /// The computation ran but did not reach a usable result.
    #[error("{0}")]
    NonConvergence(String),
}

impl CliError {
    /// The process exit code this error maps to.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Data(_) => EXIT_DATA,
            CliError::NonConvergence(_) => EXIT_NONCONVERGENCE,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Data(err.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(err: serde_json::Error) -> Self {
        CliError::Data(err.to_string())
    }
}

impl From<vsa_core::CoreError> for CliError {
    fn from(err: vsa_core::CoreError) -> Self {
        CliError::Data(err.to_string())
    }
}

impl From<vsa_segmentation::SegmentationError> for CliError {
    fn from(err: vsa_segmentation::SegmentationError) -> Self {
        CliError::Data(err.to_string())
    }
}

impl From<vsa_simplify::SimplifyError> for CliError {
    fn from(err: vsa_simplify::SimplifyError) -> Self {
        CliError::Data(err.to_string())
    }
}

impl From<vsa_bench::BenchError> for CliError {
    fn from(err: vsa_bench::BenchError) -> Self {
        CliError::Data(err.to_string())
    }
}
