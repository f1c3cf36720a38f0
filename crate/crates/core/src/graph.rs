//! Neighborhood structure over a point cloud.
//!
//! Region growing and proxy adjacency both need a notion of "nearby points".
//! A [`NeighborGraph`] packages three views of the same neighborhoods:
//!
//! - `neighbors(j)`: the directed k-nearest list of `j` (exact, ordered by
//!   distance then index),
//! - `symmetric_neighbors(j)`: the symmetrized edge set, used for flooding
//!   and connectivity so that `i ~ j` iff `j ~ i`,
//! - `extended_neighbors(j)`: the union of the k-nearest list and every
//!   point inside the ball of radius `radius(j)` (the distance to the k-th
//!   neighbor), used when testing whether two proxies touch.

use nalgebra::Point3;

use crate::cloud::PointCloud;
use crate::error::{CoreError, CoreResult};
use crate::kdtree::KdTree;

/// Combinatorial and geometric neighborhoods of every point in a cloud.
#[derive(Debug, Clone)]
pub struct NeighborGraph {
    k: usize,
    adjacency: Vec<Vec<usize>>,
    radius: Vec<f64>,
    symmetric: Vec<Vec<usize>>,
    extended: Vec<Vec<usize>>,
}

impl NeighborGraph {
    /// Wraps hand-built adjacency lists (chains, grids, ...).
    ///
    /// Lists may have fewer than `k` entries — the two ends of an open chain
    /// have a single neighbor each. `radius(j)` becomes the distance to the
    /// farthest listed neighbor and the extended lists are completed with a
    /// ball query against the actual positions, exactly as for k-nearest
    /// graphs.
    pub fn from_adjacency(cloud: &PointCloud, adjacency: Vec<Vec<usize>>) -> CoreResult<Self> {
        if adjacency.len() != cloud.len() {
            return Err(CoreError::MismatchedLengths {
                positions: cloud.len(),
                normals: adjacency.len(),
                weights: adjacency.len(),
            });
        }
        for (index, list) in adjacency.iter().enumerate() {
            for &neighbor in list {
                if neighbor >= cloud.len() || neighbor == index {
                    return Err(CoreError::InvalidAdjacency { index, neighbor });
                }
            }
        }
        let k = adjacency.iter().map(Vec::len).max().unwrap_or(0);
        let radius: Vec<f64> = adjacency
            .iter()
            .enumerate()
            .map(|(j, list)| {
                list.iter()
                    .map(|&l| (cloud.position(l) - cloud.position(j)).norm())
                    .fold(0.0, f64::max)
            })
            .collect();
        let tree = KdTree::build(cloud.positions());
        Ok(Self::assemble(cloud, &tree, k, adjacency, radius))
    }

    fn assemble(
        cloud: &PointCloud,
        tree: &KdTree,
        k: usize,
        adjacency: Vec<Vec<usize>>,
        radius: Vec<f64>,
    ) -> Self {
        let n = cloud.len();
        let mut symmetric: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (j, list) in adjacency.iter().enumerate() {
            for &l in list {
                symmetric[j].push(l);
                symmetric[l].push(j);
            }
        }
        for list in &mut symmetric {
            list.sort_unstable();
            list.dedup();
        }
        let extended: Vec<Vec<usize>> = (0..n)
            .map(|j| {
                let mut list = tree.within(&cloud.position(j), radius[j] * radius[j], Some(j));
                list.extend_from_slice(&adjacency[j]);
                list.sort_unstable();
                list.dedup();
                list
            })
            .collect();
        Self {
            k,
            adjacency,
            radius,
            symmetric,
            extended,
        }
    }

    /// Requested neighborhood size.
    #[inline]
    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of points the graph was built over.
    #[inline]
    pub fn len(&self) -> usize {
        self.adjacency.len()
    }

    /// True when the graph covers no points (never the case after construction).
    #[inline]
    pub fn is_empty(&self) -> bool {
        self.adjacency.is_empty()
    }

    /// Directed k-nearest neighbors of `j`, ordered by distance then index.
    #[inline]
    pub fn neighbors(&self, j: usize) -> &[usize] {
        &self.adjacency[j]
    }

    /// Distance from `j` to its farthest listed neighbor.
    #[inline]
    pub fn radius(&self, j: usize) -> f64 {
        self.radius[j]
    }

    /// Symmetrized neighbors of `j`, sorted by index.
    #[inline]
    pub fn symmetric_neighbors(&self, j: usize) -> &[usize] {
        &self.symmetric[j]
    }

    /// Union of the k-nearest list of `j` and all points within `radius(j)`,
    /// sorted by index.
    #[inline]
    pub fn extended_neighbors(&self, j: usize) -> &[usize] {
        &self.extended[j]
    }

    /// Whether the symmetrized graph is a single connected component.
    pub fn is_connected(&self) -> bool {
        let n = self.len();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(j) = stack.pop() {
            for &l in &self.symmetric[j] {
                if !seen[l] {
                    seen[l] = true;
                    count += 1;
                    stack.push(l);
                }
            }
        }
        count == n
    }
}

/// Builds the exact k-nearest-neighbor graph of a cloud.
///
/// Requires `1 <= k < cloud.len()`. Equidistant candidates are ordered by
/// index, so the result is independent of traversal order.
pub fn build_neighbor_graph(cloud: &PointCloud, k: usize) -> CoreResult<NeighborGraph> {
    if k == 0 || k >= cloud.len() {
        return Err(CoreError::KOutOfRange {
            k,
            points: cloud.len(),
        });
    }
    let tree = KdTree::build(cloud.positions());
    let mut adjacency = Vec::with_capacity(cloud.len());
    let mut radius = Vec::with_capacity(cloud.len());
    for j in 0..cloud.len() {
        let found = tree.nearest(&cloud.position(j), k, Some(j));
        debug_assert_eq!(found.len(), k);
        radius.push(found.last().map_or(0.0, |&(d2, _)| d2.sqrt()));
        adjacency.push(found.into_iter().map(|(_, i)| i).collect::<Vec<_>>());
    }
    Ok(NeighborGraph::assemble(cloud, &tree, k, adjacency, radius))
}

/// Per-point area weights: `w_j = sum of squared distances from p_j to its
/// k nearest neighbors`. A larger, sparser neighborhood means the point
/// represents more surface.
pub fn compute_area_weights(cloud: &PointCloud, graph: &NeighborGraph) -> Vec<f64> {
    (0..cloud.len())
        .map(|j| {
            let p: Point3<f64> = cloud.position(j);
            graph
                .neighbors(j)
                .iter()
                .map(|&l| (cloud.position(l) - p).norm_squared())
                .sum()
        })
        .collect()
}
