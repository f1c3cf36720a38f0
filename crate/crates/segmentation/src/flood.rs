//! Region growing by normal-deviation priority flooding.
//!
//! Each seed point starts a region with a fixed flooding normal. Points
//! enter a global priority queue keyed by the deviation of their normal
//! from the normal of the region trying to claim them; the queue pops the
//! smallest deviation first, so regions grow "easiest point anywhere first"
//! rather than in lockstep.
//!
//! Ties are resolved by (deviation, claiming proxy id, point index), which
//! makes the result independent of push order and therefore deterministic.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use nalgebra::Vector3;
use vsa_core::{proxy_energy, NeighborGraph, PointCloud, Proxy, Segmentation};

use crate::error::{SegmentationError, SegmentationResult};

/// A pending claim: `proxy` offers to absorb `point` at cost `priority`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Claim {
    priority: f64,
    proxy: usize,
    point: usize,
}

impl Eq for Claim {}

impl Ord for Claim {
    fn cmp(&self, other: &Self) -> Ordering {
        // Reversed: BinaryHeap is a max-heap, we want the cheapest claim.
        other
            .priority
            .total_cmp(&self.priority)
            .then_with(|| other.proxy.cmp(&self.proxy))
            .then_with(|| other.point.cmp(&self.point))
    }
}

impl PartialOrd for Claim {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Grows one region per seed over the symmetrized neighbor graph.
///
/// `seeds` pairs each seed point with the normal its region floods with
/// (the point's own normal on the first pass, the fitted proxy normal on
/// later passes). Seed order defines proxy ids. Every point must be
/// reachable from some seed; unreachable points abort with
/// [`SegmentationError::Unreached`].
pub fn flood(
    cloud: &PointCloud,
    graph: &NeighborGraph,
    seeds: &[(usize, Vector3<f64>)],
) -> SegmentationResult<Segmentation> {
    let n = cloud.len();
    if seeds.is_empty() {
        return Err(SegmentationError::InvalidSeeds {
            reason: "flood requires at least one seed".into(),
        });
    }
    let mut assignment: Vec<Option<usize>> = vec![None; n];
    for (id, &(point, _)) in seeds.iter().enumerate() {
        if point >= n {
            return Err(SegmentationError::InvalidSeeds {
                reason: format!("seed index {point} out of range for {n} points"),
            });
        }
        if assignment[point].is_some() {
            return Err(SegmentationError::InvalidSeeds {
                reason: format!("seed point {point} appears more than once"),
            });
        }
        assignment[point] = Some(id);
    }

    let mut members: Vec<Vec<usize>> = seeds.iter().map(|&(point, _)| vec![point]).collect();
    let mut heap = BinaryHeap::new();
    for (id, &(point, ref normal)) in seeds.iter().enumerate() {
        for &neighbor in graph.symmetric_neighbors(point) {
            if assignment[neighbor].is_none() {
                heap.push(Claim {
                    priority: (cloud.normal(neighbor) - normal).norm_squared(),
                    proxy: id,
                    point: neighbor,
                });
            }
        }
    }

    while let Some(claim) = heap.pop() {
        if assignment[claim.point].is_some() {
            continue; // someone cheaper got here first
        }
        assignment[claim.point] = Some(claim.proxy);
        members[claim.proxy].push(claim.point);
        let normal = &seeds[claim.proxy].1;
        for &neighbor in graph.symmetric_neighbors(claim.point) {
            if assignment[neighbor].is_none() {
                heap.push(Claim {
                    priority: (cloud.normal(neighbor) - normal).norm_squared(),
                    proxy: claim.proxy,
                    point: neighbor,
                });
            }
        }
    }

    let unreached: Vec<usize> = (0..n).filter(|&j| assignment[j].is_none()).collect();
    if !unreached.is_empty() {
        return Err(SegmentationError::Unreached { indices: unreached });
    }

    let proxies = members
        .into_iter()
        .zip(seeds)
        .enumerate()
        .map(|(id, (mut member_list, &(seed, normal)))| {
            member_list.sort_unstable();
            let energy = proxy_energy(cloud, &member_list, &normal);
            Proxy {
                id,
                members: member_list,
                center: seed,
                normal,
                energy,
            }
        })
        .collect();
    Ok(Segmentation {
        assignment,
        proxies,
    })
}
