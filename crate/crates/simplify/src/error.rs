use thiserror::Error;
use vsa_core::CoreError;

/// Errors produced while building a simplified mesh.
#[derive(Debug, Error)]
pub enum SimplifyError {
    /// A core validation failed.
    #[error(transparent)]
    Core(#[from] CoreError),

    /// Three planes are too close to parallel to intersect reliably.
    #[error(
        "plane normals are nearly dependent: smallest singular value {sigma_min:e} \
         against largest {sigma_max:e}"
    )]
    NearParallelPlanes { sigma_min: f64, sigma_max: f64 },

    /// A solver or assembly parameter is outside its valid range.
    #[error("invalid simplification config: {reason}")]
    InvalidConfig { reason: String },

    /// Inputs disagree about the number of proxies or vertices.
    #[error("inconsistent simplification input: {reason}")]
    InconsistentInput { reason: String },
}

pub type SimplifyResult<T> = Result<T, SimplifyError>;
