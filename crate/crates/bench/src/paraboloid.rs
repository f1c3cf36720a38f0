//! Energy budgets calibrated on paraboloid patches.
//!
//! A proxy that covers a curved patch can never drive its deviation energy
//! to zero; how much residual to tolerate before splitting depends on the
//! curvature and on how many points the proxy holds. This module models a
//! proxy as a square sample grid on the paraboloid `z = u^2/a^2 + v^2/b^2`
//! over `[-1, 1]^2` and evaluates its deviation energy against the flat
//! normal in closed form, which makes a principled default for the split
//! threshold.

use nalgebra::{Point3, Vector3};
use vsa_core::PointCloud;

use crate::error::{BenchError, BenchResult};

/// Parameters of the paraboloid patch used to budget proxy energy.
#[derive(Debug, Clone, Copy)]
pub struct EtaHeuristicInput {
    /// Curvature scale along `u`: the patch is `z = u^2/a^2 + v^2/b^2`.
    pub a: f64,
    /// Curvature scale along `v`.
    pub b: f64,
    /// Expected number of points per proxy.
    pub aleph: usize,
}

impl EtaHeuristicInput {
    fn validate(&self) -> BenchResult<()> {
        if !(self.a.is_finite() && self.a > 0.0 && self.b.is_finite() && self.b > 0.0) {
            return Err(BenchError::InvalidParameter {
                reason: format!(
                    "paraboloid scales must be positive and finite, got a = {}, b = {}",
                    self.a, self.b
                ),
            });
        }
        if self.aleph == 0 {
            return Err(BenchError::InvalidParameter {
                reason: "expected proxy size must be at least one point".into(),
            });
        }
        Ok(())
    }
}

/// Mean curvature of the paraboloid `z = u^2/a^2 + v^2/b^2` at `(u, v)`.
pub fn paraboloid_mean_curvature(a: f64, b: f64, u: f64, v: f64) -> f64 {
    let a2 = a * a;
    let b2 = b * b;
    let slope = 1.0 + 4.0 * u * u / (a2 * a2) + 4.0 * v * v / (b2 * b2);
    (a2 + b2 + 4.0 * u * u / a2 + 4.0 * v * v / b2) / (a2 * b2 * slope.powf(1.5))
}

/// Half-resolution of the square sample grid: the grid holds `(2 nu + 1)^2`
/// points, sized so that it roughly matches the expected proxy population.
/// The formula `ceil((sqrt(aleph) - 1) / 2)` yields zero for a single-point
/// proxy, which would degenerate the grid, so the resolution is clamped to
/// one (a 3 x 3 grid) from below.
fn grid_resolution(aleph: usize) -> usize {
    let nu = (((aleph as f64).sqrt() - 1.0) / 2.0).ceil() as usize;
    nu.max(1)
}

/// Closed-form deviation energy of a proxy sampled as a `(2 nu + 1)^2` grid
/// on the paraboloid patch, measured against the flat normal `(0, 0, 1)`.
///
/// Each sample's unit normal is `(-2u/a^2, -2v/b^2, 1)` normalized, so its
/// squared deviation from the flat normal is `2 - 2 n_z`. Summed over the
/// grid `u = j / nu`, `v = l / nu` this telescopes to the expression below.
pub fn eta_heuristic(input: &EtaHeuristicInput) -> BenchResult<f64> {
    input.validate()?;
    let nu = grid_resolution(input.aleph);
    let a2 = input.a * input.a;
    let b2 = input.b * input.b;
    let side = 2 * nu + 1;
    let mut sum = 0.0;
    for j in -(nu as i64)..=nu as i64 {
        for l in -(nu as i64)..=nu as i64 {
            let x = j as f64 / (nu as f64 * a2);
            let y = l as f64 / (nu as f64 * b2);
            sum += 1.0 / (x * x + y * y + 0.25).sqrt();
        }
    }
    Ok(2.0 * (side * side) as f64 - sum)
}

/// The sample grid behind [`eta_heuristic`] as an actual point cloud:
/// positions on the paraboloid, exact surface normals, unit weights.
///
/// Evaluating the plain deviation energy of this cloud against the flat
/// normal must reproduce [`eta_heuristic`] exactly; the two code paths share
/// no arithmetic, which makes them mutual cross-checks.
pub fn paraboloid_grid(input: &EtaHeuristicInput) -> BenchResult<PointCloud> {
    input.validate()?;
    let nu = grid_resolution(input.aleph);
    let a2 = input.a * input.a;
    let b2 = input.b * input.b;
    let side = 2 * nu + 1;
    let mut positions = Vec::with_capacity(side * side);
    let mut normals = Vec::with_capacity(side * side);
    for j in -(nu as i64)..=nu as i64 {
        for l in -(nu as i64)..=nu as i64 {
            let u = j as f64 / nu as f64;
            let v = l as f64 / nu as f64;
            positions.push(Point3::new(u, v, u * u / a2 + v * v / b2));
            normals.push(Vector3::new(-2.0 * u / a2, -2.0 * v / b2, 1.0));
        }
    }
    Ok(PointCloud::with_unit_weights(positions, normals)?)
}
