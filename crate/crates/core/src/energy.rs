//! The L^2,1 normal-deviation energy and derived quantities.
//!
//! A planar proxy scores a point set by how far the point normals stray from
//! the proxy normal:
//!
//! ```text
//! E(P_i, N_i) = sum over j in P_i of  w_j * |n_j - N_i|^2
//! ```
//!
//! For fixed membership the minimizing unit normal has the closed form
//! `N* = sum(w_j n_j) / |sum(w_j n_j)|` — expanding the energy gives
//! `sum(w_j (2 - 2 n_j . N))`, which is minimized by aligning `N` with the
//! weighted normal sum. Everything else in the crate (region growing, local
//! refinement, split and merge decisions) is driven by this energy.

use nalgebra::Vector3;

use crate::cloud::PointCloud;
use crate::error::{CoreError, CoreResult};
use crate::proxy::Segmentation;

/// Length below which a weighted normal sum is treated as direction-free.
const DEGENERATE_SUM_EPS: f64 = 1e-12;

/// Normal-deviation energy of one proxy: `sum of w_j |n_j - normal|^2` over
/// `members`.
pub fn proxy_energy(cloud: &PointCloud, members: &[usize], normal: &Vector3<f64>) -> f64 {
    members
        .iter()
        .map(|&j| cloud.weight(j) * (cloud.normal(j) - normal).norm_squared())
        .sum()
}

/// The unit normal minimizing [`proxy_energy`] for a fixed member set:
/// the normalized weighted sum of member normals.
///
/// Fails when the weighted sum has near-zero length (e.g. two antipodal
/// normals of equal weight), in which case no unique minimizer exists;
/// `proxy_id` only labels the error.
pub fn optimal_normal(
    cloud: &PointCloud,
    members: &[usize],
    proxy_id: usize,
) -> CoreResult<Vector3<f64>> {
    let sum: Vector3<f64> = members
        .iter()
        .map(|&j| cloud.weight(j) * cloud.normal(j))
        .sum();
    let length = sum.norm();
    if length < DEGENERATE_SUM_EPS {
        return Err(CoreError::DegenerateNormalSum { proxy: proxy_id });
    }
    Ok(sum / length)
}

/// The member whose normal deviates least from `normal`, with ties broken by
/// the smaller index. Panics on an empty member list.
pub fn least_deviation_member(
    cloud: &PointCloud,
    members: &[usize],
    normal: &Vector3<f64>,
) -> usize {
    members
        .iter()
        .copied()
        .min_by(|&a, &b| {
            let da = (cloud.normal(a) - normal).norm_squared();
            let db = (cloud.normal(b) - normal).norm_squared();
            da.total_cmp(&db).then(a.cmp(&b))
        })
        .expect("member list must be non-empty")
}

/// Total energy of a segmentation: the sum of per-proxy energies, recomputed
/// from current memberships and normals.
pub fn total_energy(cloud: &PointCloud, segmentation: &Segmentation) -> f64 {
    segmentation
        .proxies
        .iter()
        .map(|proxy| proxy_energy(cloud, &proxy.members, &proxy.normal))
        .sum()
}

/// Mean squared orthogonal distance from each point to the plane of its
/// proxy (through the center point, orthogonal to the proxy normal).
/// Requires a fully assigned segmentation.
pub fn mse(cloud: &PointCloud, segmentation: &Segmentation) -> CoreResult<f64> {
    let mut sum = 0.0;
    for j in 0..cloud.len() {
        let proxy_id = segmentation.assignment[j].ok_or(CoreError::UnassignedPoint { index: j })?;
        let proxy = &segmentation.proxies[proxy_id];
        let offset = cloud.position(j) - cloud.position(proxy.center);
        let distance = proxy.normal.dot(&offset);
        sum += distance * distance;
    }
    Ok(sum / cloud.len() as f64)
}
