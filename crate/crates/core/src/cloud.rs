//! Oriented point clouds.
//!
//! A [`PointCloud`] stores positions, unit normals and per-point weights in
//! parallel arrays. Construction validates the data once; afterwards the
//! cloud is immutable, so downstream algorithms can index freely without
//! re-checking.

use nalgebra::{Point3, Vector3};

use crate::error::{CoreError, CoreResult};

/// Length below which a normal is considered to have no usable direction.
const ZERO_NORMAL_EPS: f64 = 1e-12;

/// An oriented point set: positions with unit normals and positive weights.
///
/// Normals passed to the constructors are normalized; vectors of near-zero
/// length are rejected. Weights default to 1 and can be replaced wholesale
/// (e.g. with area estimates) via [`PointCloud::with_weights`], which returns
/// a new cloud sharing the same geometry.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    positions: Vec<Point3<f64>>,
    normals: Vec<Vector3<f64>>,
    weights: Vec<f64>,
}

impl PointCloud {
    /// Builds a cloud from raw arrays, validating lengths, finiteness and
    /// weights, and normalizing every normal.
    pub fn new(
        positions: Vec<Point3<f64>>,
        normals: Vec<Vector3<f64>>,
        weights: Vec<f64>,
    ) -> CoreResult<Self> {
        if positions.len() != normals.len() || positions.len() != weights.len() {
            return Err(CoreError::MismatchedLengths {
                positions: positions.len(),
                normals: normals.len(),
                weights: weights.len(),
            });
        }
        if positions.is_empty() {
            return Err(CoreError::EmptyCloud);
        }
        let mut normals = normals;
        for (index, (position, normal)) in positions.iter().zip(normals.iter_mut()).enumerate() {
            if !position.coords.iter().all(|c| c.is_finite())
                || !normal.iter().all(|c| c.is_finite())
            {
                return Err(CoreError::NonFinite { index });
            }
            let length = normal.norm();
            if length < ZERO_NORMAL_EPS {
                return Err(CoreError::ZeroLengthNormal { index, length });
            }
            *normal /= length;
        }
        for (index, &weight) in weights.iter().enumerate() {
            if !weight.is_finite() || weight <= 0.0 {
                return Err(CoreError::InvalidWeight { index, weight });
            }
        }
        Ok(Self {
            positions,
            normals,
            weights,
        })
    }

    /// Builds a cloud with every weight set to 1.
    pub fn with_unit_weights(
        positions: Vec<Point3<f64>>,
        normals: Vec<Vector3<f64>>,
    ) -> CoreResult<Self> {
        let weights = vec![1.0; positions.len()];
        Self::new(positions, normals, weights)
    }

    /// Returns a copy of this cloud with the given weights instead.
    pub fn with_weights(&self, weights: Vec<f64>) -> CoreResult<Self> {
        Self::new(self.positions.clone(), self.normals.clone(), weights)
    }

    /// Number of points.
    #[inline]
    pub fn len(&self) -> usize {
        self.positions.len()
    }

    /// Always false for a constructed cloud; present for API completeness.
    #[inline]
    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// Position of point `j`.
    #[inline]
    pub fn position(&self, j: usize) -> Point3<f64> {
        self.positions[j]
    }

    /// Unit normal of point `j`.
    #[inline]
    pub fn normal(&self, j: usize) -> Vector3<f64> {
        self.normals[j]
    }

    /// Weight of point `j`.
    #[inline]
    pub fn weight(&self, j: usize) -> f64 {
        self.weights[j]
    }

    /// All positions.
    #[inline]
    pub fn positions(&self) -> &[Point3<f64>] {
        &self.positions
    }

    /// All unit normals.
    #[inline]
    pub fn normals(&self) -> &[Vector3<f64>] {
        &self.normals
    }

    /// All weights.
    #[inline]
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}
