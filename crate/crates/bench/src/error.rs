use thiserror::Error;
use vsa_core::CoreError;
use vsa_segmentation::SegmentationError;

/// Errors produced while building or running benchmark instances.
#[derive(Debug, Error)]
pub enum BenchError {
    /// A point-cloud or graph construction failed.
    #[error(transparent)]
    Core(#[from] CoreError),

    /// The segmentation pipeline rejected the instance or failed to run.
    #[error(transparent)]
    Segmentation(#[from] SegmentationError),

    /// A benchmark parameter is outside its valid range.
    #[error("invalid benchmark parameter: {reason}")]
    InvalidParameter { reason: String },

    /// An expected entry is missing from a pipeline trace.
    #[error("pipeline trace is missing {what}")]
    MissingReport { what: String },
}

pub type BenchResult<T> = Result<T, BenchError>;
