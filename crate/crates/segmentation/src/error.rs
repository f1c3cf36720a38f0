//! Errors and per-operation rejection reasons.
//!
//! Hard failures ([`SegmentationError`]) abort a pipeline run. Split and
//! merge attempts instead return lightweight rejection reasons — a proxy
//! that cannot be split or a pair that must not merge is ordinary control
//! flow, not an error.

use thiserror::Error;
use vsa_core::CoreError;

/// Fatal errors from segmentation operations.
#[derive(Debug, Error)]
pub enum SegmentationError {
    /// Bubbled-up core failure (degenerate normal sums, bad graphs, ...).
    #[error(transparent)]
    Core(#[from] CoreError),

    /// Seed list was empty, contained duplicates or out-of-range indices,
    /// or requested more seeds than points.
    #[error("invalid seeds: {reason}")]
    InvalidSeeds { reason: String },

    /// Invalid pipeline parameters.
    #[error("invalid pipeline configuration: {reason}")]
    InvalidConfig { reason: String },

    /// Region growing never reached these points: they live in graph
    /// components that contain no seed.
    #[error("flooding left {} point(s) unassigned (first: {})", .indices.len(), .indices.first().copied().unwrap_or(0))]
    Unreached { indices: Vec<usize> },

    /// Termination guard: an assignment state recurred during local
    /// refinement, which contradicts strict energy descent.
    #[error("assignment state repeated at iteration {iteration}; refinement would cycle")]
    StateRepeated { iteration: usize },
}

/// Why a split attempt was declined.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SplitRejection {
    /// A proxy with fewer than two members cannot be split.
    TooFewMembers,
    /// All members fell on one side of the splitting plane.
    EmptySide,
    /// A child had a vanishing weighted normal sum, so no proxy could be
    /// fitted to it.
    DegenerateChild,
}

/// Why a merge attempt was declined.
#[derive(Debug, Clone, PartialEq)]
pub enum MergeRejection {
    /// The merged proxy's energy would reach or exceed the threshold.
    EnergyAtLeastEta { energy: f64 },
    /// The size-weighted normal sum of the pair vanished.
    DegenerateNormal,
}

/// Convenience alias for fallible segmentation operations.
pub type SegmentationResult<T> = Result<T, SegmentationError>;
