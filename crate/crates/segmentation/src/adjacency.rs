//! Which proxies touch which.

use std::collections::BTreeSet;

use vsa_core::{NeighborGraph, Segmentation};

/// Unordered pairs `(i, j)`, `i < j`, of proxies that touch: some point of
/// one has a point of the other among its extended neighbors (k-nearest
/// list united with the ball of its k-th-neighbor radius).
///
/// The geometric ball component lets regions that meet across a sampling
/// gap — e.g. along a sharp edge where the k-nearest lists jump over the
/// crease — still count as adjacent. Unassigned points are ignored.
pub fn proxy_adjacency(
    graph: &NeighborGraph,
    segmentation: &Segmentation,
) -> BTreeSet<(usize, usize)> {
    let mut pairs = BTreeSet::new();
    for point in 0..graph.len() {
        let Some(a) = segmentation.assignment[point] else {
            continue;
        };
        for &neighbor in graph.extended_neighbors(point) {
            let Some(b) = segmentation.assignment[neighbor] else {
                continue;
            };
            if a != b {
                pairs.insert((a.min(b), a.max(b)));
            }
        }
    }
    pairs
}
