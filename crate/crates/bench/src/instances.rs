//! Canonical experiment instances with calibrated scales and weights.
//!
//! The deviation energy sums weighted squared normal differences, so the
//! absolute numbers a threshold is compared against depend on the weighting
//! scheme and, for neighborhood-area weights, on the absolute size of the
//! model. The constructors here pin sizes and weights so that the standard
//! thresholds land in their intended operating ranges.

use vsa_core::{build_neighbor_graph, compute_area_weights, NeighborGraph, PointCloud};

use crate::error::BenchResult;
use crate::shapes::{dodecahedron_cloud, mean_neighbor_distance, perturb, scale_cloud, sphere_cloud};

/// Thresholds of the standard sphere sweep, coarsest first.
pub const SWEEP_ETAS: [f64; 5] = [500.0, 200.0, 100.0, 50.0, 25.0];

/// Neighborhood size used by the sphere sweep.
pub const SWEEP_K: usize = 8;

/// The sphere instance behind the threshold sweep: 5,122 golden-spiral
/// samples on a radius-4 sphere, weighted by neighborhood area over the
/// `k = 8` graph.
///
/// The radius calibrates the weighted energy scale so that the finest sweep
/// threshold (25) settles around two dozen proxies, in line with the
/// curvature budget the thresholds were designed for.
pub fn sweep_sphere() -> BenchResult<(PointCloud, NeighborGraph)> {
    let cloud = scale_cloud(&sphere_cloud(5122)?, 4.0)?;
    let graph = build_neighbor_graph(&cloud, SWEEP_K)?;
    let weighted = cloud.with_weights(compute_area_weights(&cloud, &graph))?;
    Ok((weighted, graph))
}

/// Neighborhood size used by the noisy dodecahedron experiment. The larger
/// neighborhood keeps the graph connected despite the positional noise.
pub const DODECA_K: usize = 12;

/// The noisy dodecahedron instance: 962 samples with exact face normals,
/// positions displaced along their normals by Gaussian noise with amplitude
/// 25% of the mean 12-neighbor distance, weighted by neighborhood area over
/// the `k = 12` graph built on the noisy positions.
pub fn noisy_dodecahedron(rng_seed: u64) -> BenchResult<(PointCloud, NeighborGraph)> {
    let base = dodecahedron_cloud(962)?;
    let sigma = 0.25 * mean_neighbor_distance(&base, DODECA_K);
    let noisy = perturb(&base, sigma, 0.0, rng_seed)?;
    let graph = build_neighbor_graph(&noisy, DODECA_K)?;
    let weighted = noisy.with_weights(compute_area_weights(&noisy, &graph))?;
    Ok((weighted, graph))
}
