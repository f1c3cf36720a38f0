//! Vertex positions by direct plane intersection.
//!
//! Every tuple contributes one vertex: the common point of three of its
//! proxy planes. Tuples of more than three proxies over-determine the vertex,
//! so the best-conditioned triple of planes decides it and the remaining
//! planes are ignored — their faces may end up slightly non-planar, which is
//! the price of the direct method. A sanity cutoff drops vertices that land
//! far away from all contributing regions, as happens when nearly parallel
//! planes survive the conditioning test.

use nalgebra::Point3;

use vsa_core::{PointCloud, Segmentation};

use crate::error::{SimplifyError, SimplifyResult};
use crate::intersect::{best_three_subset, intersect_three_planes, NEAR_PARALLEL_RATIO};
use crate::types::{MeshWarning, QTuple, SolvedVertices};

/// A vertex may lie at most this multiple of a region's bounding radius from
/// that region's centroid; vertices too far from every contributing region
/// are dropped.
pub const DISTANCE_CUTOFF_FACTOR: f64 = 3.0;

/// Solves one vertex per tuple by intersecting three of its proxy planes.
pub(crate) fn solve_vertices_naive(
    cloud: &PointCloud,
    segmentation: &Segmentation,
    tuples: &[QTuple],
) -> SimplifyResult<SolvedVertices> {
    let bounds = region_bounds(cloud, segmentation);
    let mut vertices = Vec::new();
    let mut vertex_tuples = Vec::new();
    let mut warnings = Vec::new();

    for tuple in tuples {
        if let Some(&bad) = tuple.proxies.iter().find(|&&p| p >= segmentation.proxy_count()) {
            return Err(SimplifyError::InconsistentInput {
                reason: format!(
                    "tuple references proxy {bad} but the segmentation has {}",
                    segmentation.proxy_count()
                ),
            });
        }
        let planes: Vec<_> = tuple
            .proxies
            .iter()
            .map(|&p| segmentation.proxies[p].plane(cloud))
            .collect();
        let Some((subset, sigma_min, sigma_max)) = best_three_subset(&planes) else {
            warnings.push(MeshWarning::TupleSkipped {
                proxies: tuple.proxies.clone(),
                reason: "fewer than three planes".into(),
            });
            continue;
        };
        if sigma_min < NEAR_PARALLEL_RATIO * sigma_max {
            warnings.push(MeshWarning::TupleSkipped {
                proxies: tuple.proxies.clone(),
                reason: format!(
                    "no well-conditioned plane triple (best sigma_min {sigma_min:.3e} \
                     vs sigma_max {sigma_max:.3e})"
                ),
            });
            continue;
        }
        let triple = [planes[subset[0]], planes[subset[1]], planes[subset[2]]];
        let vertex = match intersect_three_planes(&triple) {
            Ok(v) => v,
            Err(SimplifyError::NearParallelPlanes {
                sigma_min,
                sigma_max,
            }) => {
                warnings.push(MeshWarning::TupleSkipped {
                    proxies: tuple.proxies.clone(),
                    reason: format!(
                        "plane triple degenerated during solve (sigma_min {sigma_min:.3e} \
                         vs sigma_max {sigma_max:.3e})"
                    ),
                });
                continue;
            }
            Err(other) => return Err(other),
        };
        if !near_some_region(&vertex, tuple, &bounds) {
            warnings.push(MeshWarning::TupleSkipped {
                proxies: tuple.proxies.clone(),
                reason: format!(
                    "vertex ({:.3}, {:.3}, {:.3}) lies beyond {DISTANCE_CUTOFF_FACTOR}x the \
                     bounding radius of every contributing region",
                    vertex.x, vertex.y, vertex.z
                ),
            });
            continue;
        }
        vertices.push(vertex);
        vertex_tuples.push(tuple.clone());
    }

    Ok(SolvedVertices {
        vertices,
        vertex_tuples,
        corrected_normals: None,
        feasible: true,
        warnings,
    })
}

/// Per-proxy member centroid and bounding radius around it.
fn region_bounds(cloud: &PointCloud, segmentation: &Segmentation) -> Vec<(Point3<f64>, f64)> {
    segmentation
        .proxies
        .iter()
        .map(|proxy| {
            let mut centroid = Point3::origin();
            for &j in &proxy.members {
                centroid += cloud.position(j).coords;
            }
            centroid /= proxy.members.len() as f64;
            let radius = proxy
                .members
                .iter()
                .map(|&j| (cloud.position(j) - centroid).norm())
                .fold(0.0, f64::max);
            (centroid, radius)
        })
        .collect()
}

/// True when the vertex lies within the cutoff of at least one contributing
/// region.
fn near_some_region(vertex: &Point3<f64>, tuple: &QTuple, bounds: &[(Point3<f64>, f64)]) -> bool {
    tuple.proxies.iter().any(|&p| {
        let (centroid, radius) = bounds[p];
        (vertex - centroid).norm() <= DISTANCE_CUTOFF_FACTOR * radius
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use nalgebra::Vector3;
    use vsa_bench::cube_cloud;
    use vsa_core::{build_neighbor_graph, Segmentation};
    use vsa_segmentation::proxy_adjacency;

    use crate::tuples::enumerate_q_tuples;

    /// Cube sampled on six faces with one exact proxy per face.
    fn cube_face_segmentation(per_side: usize) -> (PointCloud, Segmentation) {
        let cloud = cube_cloud(per_side).unwrap();
        let per_face = per_side * per_side;
        let labels: Vec<usize> = (0..cloud.len()).map(|j| j / per_face).collect();
        let segmentation = Segmentation::from_labels(&cloud, &labels).unwrap();
        (cloud, segmentation)
    }

    #[test]
    fn cube_faces_intersect_in_the_eight_corners() {
        let (cloud, segmentation) = cube_face_segmentation(10);
        let graph = build_neighbor_graph(&cloud, 8).unwrap();
        let adjacency = proxy_adjacency(&graph, &segmentation);
        let tuples = enumerate_q_tuples(segmentation.proxy_count(), &adjacency);
        assert_eq!(tuples.len(), 8);

        let solved = solve_vertices_naive(&cloud, &segmentation, &tuples).unwrap();
        assert!(solved.warnings.is_empty());
        assert!(solved.feasible);
        assert_eq!(solved.vertices.len(), 8);

        let mut seen: Vec<[i32; 3]> = solved
            .vertices
            .iter()
            .map(|v| {
                assert_relative_eq!(v.x.abs(), 1.0, epsilon = 1e-9);
                assert_relative_eq!(v.y.abs(), 1.0, epsilon = 1e-9);
                assert_relative_eq!(v.z.abs(), 1.0, epsilon = 1e-9);
                [
                    v.x.signum() as i32,
                    v.y.signum() as i32,
                    v.z.signum() as i32,
                ]
            })
            .collect();
        seen.sort_unstable();
        seen.dedup();
        assert_eq!(seen.len(), 8, "all eight sign patterns appear");
    }

    #[test]
    fn near_parallel_tuple_is_skipped_with_warning() {
        // Two slabs of points with almost identical normals plus one
        // orthogonal wall: no triple of planes is well conditioned.
        let mut positions = Vec::new();
        let mut normals = Vec::new();
        let tilt = Vector3::new(1e-9, 0.0, 1.0).normalize();
        for i in 0..4 {
            positions.push(Point3::new(i as f64, 0.0, 0.0));
            normals.push(Vector3::z());
        }
        for i in 0..4 {
            positions.push(Point3::new(i as f64, 1.0, 1.0));
            normals.push(tilt);
        }
        for i in 0..4 {
            positions.push(Point3::new(0.0, i as f64, 0.5));
            normals.push(Vector3::x());
        }
        let cloud = PointCloud::with_unit_weights(positions, normals).unwrap();
        let labels = vec![0, 0, 0, 0, 1, 1, 1, 1, 2, 2, 2, 2];
        let segmentation = Segmentation::from_labels(&cloud, &labels).unwrap();
        let tuples = vec![QTuple {
            proxies: vec![0, 1, 2],
        }];

        let solved = solve_vertices_naive(&cloud, &segmentation, &tuples).unwrap();
        assert!(solved.vertices.is_empty());
        assert_eq!(solved.warnings.len(), 1);
        assert!(matches!(
            &solved.warnings[0],
            MeshWarning::TupleSkipped { proxies, .. } if proxies == &vec![0, 1, 2]
        ));
    }

    #[test]
    fn runaway_vertices_fail_the_distance_cutoff() {
        // Three planes meeting far away from every region: two walls whose
        // line of intersection is distant, plus a floor. The intersection
        // point (100, 0, 0) is far outside all three clusters of points.
        let mut positions = Vec::new();
        let mut normals = Vec::new();
        let left = Vector3::new(1.0, 0.05, 0.0).normalize();
        let right = Vector3::new(1.0, -0.05, 0.0).normalize();
        for i in 0..4 {
            // Plane through (0, 100, z) with normal `left` passes near
            // x = 100 - 0.05 * 100 ... pick centers so planes meet at x≈100.
            positions.push(Point3::new(5.0 - 0.05 * (100.0 - 5.0), 100.0 + i as f64, 0.0));
            normals.push(left);
        }
        for i in 0..4 {
            positions.push(Point3::new(5.0 + 0.05 * (100.0 - 5.0), -(100.0 + i as f64), 0.0));
            normals.push(right);
        }
        for i in 0..4 {
            positions.push(Point3::new(i as f64, 0.0, 0.0));
            normals.push(Vector3::z());
        }
        let cloud = PointCloud::with_unit_weights(positions, normals).unwrap();
        let labels = vec![0, 0, 0, 0, 1, 1, 1, 1, 2, 2, 2, 2];
        let segmentation = Segmentation::from_labels(&cloud, &labels).unwrap();
        let tuples = vec![QTuple {
            proxies: vec![0, 1, 2],
        }];

        let solved = solve_vertices_naive(&cloud, &segmentation, &tuples).unwrap();
        assert!(solved.vertices.is_empty());
        assert!(matches!(
            &solved.warnings[0],
            MeshWarning::TupleSkipped { reason, .. } if reason.contains("bounding radius")
        ));
    }

    #[test]
    fn four_plane_tuple_uses_best_conditioned_triple() {
        // Four planes through a common point: x, y, z walls plus a slightly
        // tilted copy of the z wall. The well-conditioned triple must win and
        // reproduce the common point exactly.
        let corner = Point3::new(1.0, 2.0, 3.0);
        let tilted = Vector3::new(0.01, 0.0, 1.0).normalize();
        let mut positions = Vec::new();
        let mut normals = Vec::new();
        for (normal, along, other) in [
            (Vector3::x(), Vector3::y(), Vector3::z()),
            (Vector3::y(), Vector3::x(), Vector3::z()),
            (Vector3::z(), Vector3::x(), Vector3::y()),
            (tilted, Vector3::y(), tilted.cross(&Vector3::y())),
        ] {
            for i in 0..3 {
                let offset = along * (0.1 * (i + 1) as f64) + other * (0.05 * i as f64);
                positions.push(corner + offset);
                normals.push(normal);
            }
        }
        let cloud = PointCloud::with_unit_weights(positions, normals).unwrap();
        let labels: Vec<usize> = (0..12).map(|j| j / 3).collect();
        let segmentation = Segmentation::from_labels(&cloud, &labels).unwrap();
        let tuples = vec![QTuple {
            proxies: vec![0, 1, 2, 3],
        }];

        let solved = solve_vertices_naive(&cloud, &segmentation, &tuples).unwrap();
        assert_eq!(solved.vertices.len(), 1);
        // Whatever triple is chosen, all four planes pass through `corner`
        // up to fit error; the orthogonal triple reproduces it tightly.
        assert_relative_eq!(solved.vertices[0], corner, epsilon = 1e-6);
    }

    #[test]
    fn tuple_with_unknown_proxy_is_an_error() {
        let (cloud, segmentation) = cube_face_segmentation(4);
        let tuples = vec![QTuple {
            proxies: vec![0, 1, 99],
        }];
        assert!(matches!(
            solve_vertices_naive(&cloud, &segmentation, &tuples),
            Err(SimplifyError::InconsistentInput { .. })
        ));
    }
}
