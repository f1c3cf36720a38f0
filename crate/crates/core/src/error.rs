//! Error type shared by all core operations.

use thiserror::Error;

/// Errors produced while building or validating core data structures.
#[derive(Debug, Error)]
pub enum CoreError {
    /// A point cloud must contain at least one point.
    #[error("point cloud is empty")]
    EmptyCloud,

    /// Position, normal and weight arrays must have identical lengths.
    #[error("mismatched array lengths: {positions} positions, {normals} normals, {weights} weights")]
    MismatchedLengths {
        positions: usize,
        normals: usize,
        weights: usize,
    },

    /// Normals are normalized on construction; a (near-)zero vector has no direction.
    #[error("normal {index} has near-zero length {length:.3e} and cannot be normalized")]
    ZeroLengthNormal { index: usize, length: f64 },

    /// Positions and normals must be finite.
    #[error("point {index} has a non-finite coordinate")]
    NonFinite { index: usize },

    /// Per-point weights must be positive and finite.
    #[error("weight of point {index} must be positive and finite, got {weight}")]
    InvalidWeight { index: usize, weight: f64 },

    /// Neighborhood size must satisfy `1 <= k < number of points`.
    #[error("k = {k} is out of range for {points} points (need 1 <= k < points)")]
    KOutOfRange { k: usize, points: usize },

    /// A hand-built adjacency list referenced a bad index.
    #[error("adjacency entry {neighbor} of point {index} is out of bounds or self-referential")]
    InvalidAdjacency { index: usize, neighbor: usize },

    /// The weighted normal sum of a proxy vanished; the fitted normal
    /// `sum(w_j n_j) / |sum(w_j n_j)|` is undefined.
    #[error("weighted normals of proxy {proxy} sum to (near) zero; fitted normal is undefined")]
    DegenerateNormalSum { proxy: usize },

    /// An operation required a fully assigned segmentation.
    #[error("point {index} has no proxy assignment")]
    UnassignedPoint { index: usize },

    /// A structural invariant of a segmentation does not hold.
    #[error("inconsistent segmentation: {reason}")]
    InvalidSegmentation { reason: String },
}

/// Convenience alias used throughout the core crate.
pub type CoreResult<T> = Result<T, CoreError>;
