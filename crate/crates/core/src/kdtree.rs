//! A small exact kd-tree for nearest-neighbor and ball queries.
//!
//! The tree exists to make neighborhood construction `O(n log n)` instead of
//! `O(n^2)`; it is not tuned for huge inputs. Queries are exact and fully
//! deterministic: candidates are ordered by `(squared distance, index)`, so
//! equidistant points are always resolved the same way regardless of build
//! or traversal order.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use nalgebra::Point3;

const NONE: i32 = -1;

#[derive(Debug, Clone, Copy)]
struct Node {
    /// Index of the point stored at this node.
    point: usize,
    /// Split axis (0, 1, 2), cycling with depth.
    axis: usize,
    left: i32,
    right: i32,
}

/// Entry kept in the k-nearest max-heap, ordered by `(squared distance, index)`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Candidate {
    dist2: f64,
    index: usize,
}

impl Eq for Candidate {}

impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        self.dist2
            .total_cmp(&other.dist2)
            .then(self.index.cmp(&other.index))
    }
}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Exact kd-tree over a fixed set of points.
#[derive(Debug, Clone)]
pub struct KdTree {
    nodes: Vec<Node>,
    root: i32,
    points: Vec<Point3<f64>>,
}

impl KdTree {
    /// Builds a balanced tree; points are split at the median of the cycling
    /// axis, with ties broken by point index so the layout is deterministic.
    pub fn build(points: &[Point3<f64>]) -> Self {
        let mut order: Vec<usize> = (0..points.len()).collect();
        let mut nodes = Vec::with_capacity(points.len());
        let root = Self::build_recursive(points, &mut order[..], 0, &mut nodes);
        Self {
            nodes,
            root,
            points: points.to_vec(),
        }
    }

    fn build_recursive(
        points: &[Point3<f64>],
        order: &mut [usize],
        depth: usize,
        nodes: &mut Vec<Node>,
    ) -> i32 {
        if order.is_empty() {
            return NONE;
        }
        let axis = depth % 3;
        let mid = order.len() / 2;
        order.select_nth_unstable_by(mid, |&a, &b| {
            points[a][axis].total_cmp(&points[b][axis]).then(a.cmp(&b))
        });
        let point = order[mid];
        let slot = nodes.len();
        nodes.push(Node {
            point,
            axis,
            left: NONE,
            right: NONE,
        });
        let (before, rest) = order.split_at_mut(mid);
        let left = Self::build_recursive(points, before, depth + 1, nodes);
        let right = Self::build_recursive(points, &mut rest[1..], depth + 1, nodes);
        nodes[slot].left = left;
        nodes[slot].right = right;
        slot as i32
    }

    /// The `k` nearest neighbors of `query`, sorted ascending by
    /// `(squared distance, index)`. `exclude` removes one index from
    /// consideration (typically the query point itself). Returns fewer than
    /// `k` entries only when the tree holds fewer candidates.
    pub fn nearest(&self, query: &Point3<f64>, k: usize, exclude: Option<usize>) -> Vec<(f64, usize)> {
        let mut heap: BinaryHeap<Candidate> = BinaryHeap::with_capacity(k + 1);
        if k > 0 {
            self.nearest_recursive(self.root, query, k, exclude, &mut heap);
        }
        heap.into_sorted_vec()
            .into_iter()
            .map(|c| (c.dist2, c.index))
            .collect()
    }

    fn nearest_recursive(
        &self,
        node: i32,
        query: &Point3<f64>,
        k: usize,
        exclude: Option<usize>,
        heap: &mut BinaryHeap<Candidate>,
    ) {
        if node == NONE {
            return;
        }
        let node = self.nodes[node as usize];
        if Some(node.point) != exclude {
            let candidate = Candidate {
                dist2: (self.points[node.point] - query).norm_squared(),
                index: node.point,
            };
            if heap.len() < k {
                heap.push(candidate);
            } else if candidate < *heap.peek().expect("heap is non-empty") {
                heap.pop();
                heap.push(candidate);
            }
        }
        let delta = query[node.axis] - self.points[node.point][node.axis];
        let (near, far) = if delta < 0.0 {
            (node.left, node.right)
        } else {
            (node.right, node.left)
        };
        self.nearest_recursive(near, query, k, exclude, heap);
        // The far side can still hold a candidate unless the splitting plane
        // alone is strictly farther than the current worst; on a tie a
        // smaller index could displace the worst, so only prune on strict.
        let prune = heap.len() == k
            && delta * delta > heap.peek().expect("heap is non-empty").dist2;
        if !prune {
            self.nearest_recursive(far, query, k, exclude, heap);
        }
    }

    /// All point indices with squared distance to `query` at most `radius2`
    /// (inclusive), excluding `exclude`, sorted ascending by index.
    pub fn within(&self, query: &Point3<f64>, radius2: f64, exclude: Option<usize>) -> Vec<usize> {
        let mut hits = Vec::new();
        self.within_recursive(self.root, query, radius2, exclude, &mut hits);
        hits.sort_unstable();
        hits
    }

    fn within_recursive(
        &self,
        node: i32,
        query: &Point3<f64>,
        radius2: f64,
        exclude: Option<usize>,
        hits: &mut Vec<usize>,
    ) {
        if node == NONE {
            return;
        }
        let node = self.nodes[node as usize];
        if Some(node.point) != exclude
            && (self.points[node.point] - query).norm_squared() <= radius2
        {
            hits.push(node.point);
        }
        let delta = query[node.axis] - self.points[node.point][node.axis];
        let (near, far) = if delta < 0.0 {
            (node.left, node.right)
        } else {
            (node.right, node.left)
        };
        self.within_recursive(near, query, radius2, exclude, hits);
        if delta * delta <= radius2 {
            self.within_recursive(far, query, radius2, exclude, hits);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Reference result: full scan ordered by `(squared distance, index)`.
    fn brute_force_knn(
        points: &[Point3<f64>],
        query: &Point3<f64>,
        k: usize,
        exclude: Option<usize>,
    ) -> Vec<(f64, usize)> {
        let mut all: Vec<(f64, usize)> = points
            .iter()
            .enumerate()
            .filter(|(i, _)| Some(*i) != exclude)
            .map(|(i, p)| ((p - query).norm_squared(), i))
            .collect();
        all.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        all.truncate(k);
        all
    }

    fn random_points(count: usize, seed: u64) -> Vec<Point3<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count)
            .map(|_| {
                Point3::new(
                    rng.random_range(-1.0..1.0),
                    rng.random_range(-1.0..1.0),
                    rng.random_range(-1.0..1.0),
                )
            })
            .collect()
    }

    #[test]
    fn matches_brute_force_on_random_points() {
        let points = random_points(200, 7);
        let tree = KdTree::build(&points);
        for i in 0..points.len() {
            let got = tree.nearest(&points[i], 8, Some(i));
            let want = brute_force_knn(&points, &points[i], 8, Some(i));
            assert_eq!(got, want, "query point {i}");
        }
    }

    #[test]
    fn breaks_ties_by_index() {
        // Four corners of a square are equidistant from the center.
        let points = vec![
            Point3::new(1.0, 1.0, 0.0),
            Point3::new(-1.0, 1.0, 0.0),
            Point3::new(-1.0, -1.0, 0.0),
            Point3::new(1.0, -1.0, 0.0),
        ];
        let tree = KdTree::build(&points);
        let got = tree.nearest(&Point3::origin(), 2, None);
        assert_eq!(got[0].1, 0);
        assert_eq!(got[1].1, 1);
    }

    #[test]
    fn ball_query_is_inclusive_and_sorted() {
        let points = vec![
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(1.0, 0.0, 0.0),
            Point3::new(2.0, 0.0, 0.0),
            Point3::new(0.0, 1.0, 0.0),
        ];
        let tree = KdTree::build(&points);
        // Radius exactly 1: points at distance 1 must be included.
        let hits = tree.within(&points[0], 1.0, Some(0));
        assert_eq!(hits, vec![1, 3]);
    }

    #[test]
    fn within_matches_brute_force() {
        let points = random_points(150, 13);
        let tree = KdTree::build(&points);
        for i in 0..points.len() {
            let r2 = 0.25;
            let got = tree.within(&points[i], r2, Some(i));
            let mut want: Vec<usize> = points
                .iter()
                .enumerate()
                .filter(|(j, p)| *j != i && (*p - points[i]).norm_squared() <= r2)
                .map(|(j, _)| j)
                .collect();
            want.sort_unstable();
            assert_eq!(got, want, "query point {i}");
        }
    }
}
