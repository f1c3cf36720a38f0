//! Samplers for simple solids with exact per-face normals.

use nalgebra::{Point3, Vector3};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use vsa_core::{KdTree, PointCloud};

use crate::error::{BenchError, BenchResult};

/// Samples the cube `[-1, 1]^3` with a `per_side x per_side` grid on each of
/// the six faces. Grid cells are inset by half a step so no sample lies on
/// an edge, keeping every normal unambiguous.
pub fn cube_cloud(per_side: usize) -> BenchResult<PointCloud> {
    if per_side == 0 {
        return Err(BenchError::InvalidParameter {
            reason: "cube needs at least one sample per face side".into(),
        });
    }
    let coord = |i: usize| -1.0 + 2.0 * (i as f64 + 0.5) / per_side as f64;
    let faces = [
        (Vector3::x(), 0),
        (-Vector3::x(), 0),
        (Vector3::y(), 1),
        (-Vector3::y(), 1),
        (Vector3::z(), 2),
        (-Vector3::z(), 2),
    ];
    let mut positions = Vec::with_capacity(6 * per_side * per_side);
    let mut normals = Vec::with_capacity(6 * per_side * per_side);
    for (normal, axis) in faces {
        for i in 0..per_side {
            for j in 0..per_side {
                let (u, v) = (coord(i), coord(j));
                let mut p = Point3::origin();
                p[axis] = normal[axis];
                p[(axis + 1) % 3] = u;
                p[(axis + 2) % 3] = v;
                positions.push(p);
                normals.push(normal);
            }
        }
    }
    Ok(PointCloud::with_unit_weights(positions, normals)?)
}

/// Samples the octahedron `|x| + |y| + |z| = 1` by casting evenly spread
/// directions from the origin onto its faces; normals are the exact face
/// normals `(+-1, +-1, +-1) / sqrt(3)`.
pub fn octahedron_cloud(count: usize) -> BenchResult<PointCloud> {
    let offset = 1.0 / 3.0_f64.sqrt();
    let mut faces = Vec::with_capacity(8);
    for sx in [1.0, -1.0] {
        for sy in [1.0, -1.0] {
            for sz in [1.0, -1.0] {
                faces.push((Vector3::new(sx, sy, sz) / 3.0_f64.sqrt(), offset));
            }
        }
    }
    project_to_solid(count, &faces)
}

/// Samples a regular dodecahedron the same way; normals are the twelve face
/// normals, and positions land exactly on the face planes.
pub fn dodecahedron_cloud(count: usize) -> BenchResult<PointCloud> {
    let phi = (1.0 + 5.0_f64.sqrt()) / 2.0;
    let mut vertices = Vec::with_capacity(20);
    for sx in [1.0, -1.0] {
        for sy in [1.0, -1.0] {
            for sz in [1.0, -1.0] {
                vertices.push(Vector3::new(sx, sy, sz));
            }
        }
    }
    for s1 in [1.0, -1.0] {
        for s2 in [1.0, -1.0] {
            vertices.push(Vector3::new(0.0, s1 / phi, s2 * phi));
            vertices.push(Vector3::new(s1 / phi, s2 * phi, 0.0));
            vertices.push(Vector3::new(s1 * phi, 0.0, s2 / phi));
        }
    }
    // Face normals of the dodecahedron point at the vertices of its dual
    // icosahedron; the plane offset is the largest projection of any vertex.
    let mut faces = Vec::with_capacity(12);
    for s1 in [1.0, -1.0] {
        for s2 in [1.0, -1.0] {
            for dir in [
                Vector3::new(0.0, s1, s2 * phi),
                Vector3::new(s1, s2 * phi, 0.0),
                Vector3::new(s1 * phi, 0.0, s2),
            ] {
                let normal = dir.normalize();
                let offset = vertices
                    .iter()
                    .map(|v| v.dot(&normal))
                    .fold(f64::NEG_INFINITY, f64::max);
                faces.push((normal, offset));
            }
        }
    }
    project_to_solid(count, &faces)
}

/// Evenly spread points on the unit sphere along a golden-angle spiral,
/// with outward normals.
pub fn sphere_cloud(count: usize) -> BenchResult<PointCloud> {
    if count == 0 {
        return Err(BenchError::InvalidParameter {
            reason: "sphere needs at least one sample".into(),
        });
    }
    let directions = fibonacci_directions(count);
    let positions = directions.iter().map(|d| Point3::origin() + d).collect();
    Ok(PointCloud::with_unit_weights(positions, directions)?)
}

/// Displaces every position along its normal by Gaussian noise of standard
/// deviation `sigma_position`, and tilts every normal by an isotropic
/// Gaussian of per-component standard deviation `sigma_normal` (radians, for
/// small angles) before renormalizing. Weights are preserved.
pub fn perturb(
    cloud: &PointCloud,
    sigma_position: f64,
    sigma_normal: f64,
    rng_seed: u64,
) -> BenchResult<PointCloud> {
    if !(sigma_position.is_finite()
        && sigma_position >= 0.0
        && sigma_normal.is_finite()
        && sigma_normal >= 0.0)
    {
        return Err(BenchError::InvalidParameter {
            reason: format!(
                "noise levels must be non-negative and finite, got {sigma_position} and {sigma_normal}"
            ),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let along = Normal::new(0.0, sigma_position).expect("validated sigma");
    let tilt = Normal::new(0.0, sigma_normal).expect("validated sigma");
    let mut positions = Vec::with_capacity(cloud.len());
    let mut normals = Vec::with_capacity(cloud.len());
    for j in 0..cloud.len() {
        let n = cloud.normal(j);
        positions.push(cloud.position(j) + n * along.sample(&mut rng));
        let jitter = Vector3::new(
            tilt.sample(&mut rng),
            tilt.sample(&mut rng),
            tilt.sample(&mut rng),
        );
        normals.push(n + jitter);
    }
    Ok(PointCloud::new(
        positions,
        normals,
        cloud.weights().to_vec(),
    )?)
}

/// Mean distance from each point to its nearest neighbor; a natural length
/// scale for choosing noise levels.
pub fn mean_nearest_distance(cloud: &PointCloud) -> f64 {
    mean_neighbor_distance(cloud, 1)
}

/// Mean distance over all points and each of their `k` nearest neighbors.
pub fn mean_neighbor_distance(cloud: &PointCloud, k: usize) -> f64 {
    if cloud.len() < 2 || k == 0 {
        return 0.0;
    }
    let k = k.min(cloud.len() - 1);
    let tree = KdTree::build(cloud.positions());
    let total: f64 = (0..cloud.len())
        .map(|j| {
            tree.nearest(&cloud.position(j), k, Some(j))
                .iter()
                .map(|(d2, _)| d2.sqrt())
                .sum::<f64>()
        })
        .sum();
    total / (k * cloud.len()) as f64
}

/// Uniformly scales every position by `factor`, keeping normals and weights.
pub fn scale_cloud(cloud: &PointCloud, factor: f64) -> BenchResult<PointCloud> {
    if !(factor.is_finite() && factor > 0.0) {
        return Err(BenchError::InvalidParameter {
            reason: format!("scale factor must be positive and finite, got {factor}"),
        });
    }
    Ok(PointCloud::new(
        cloud.positions().iter().map(|p| p * factor).collect(),
        cloud.normals().to_vec(),
        cloud.weights().to_vec(),
    )?)
}

/// Casts `count` evenly spread directions from the origin onto the convex
/// solid described by its face planes `normal . p = offset`.
fn project_to_solid(count: usize, faces: &[(Vector3<f64>, f64)]) -> BenchResult<PointCloud> {
    if count == 0 {
        return Err(BenchError::InvalidParameter {
            reason: "solid sampling needs at least one point".into(),
        });
    }
    let mut positions = Vec::with_capacity(count);
    let mut normals = Vec::with_capacity(count);
    for dir in fibonacci_directions(count) {
        let mut best = (f64::INFINITY, 0);
        for (idx, (normal, offset)) in faces.iter().enumerate() {
            let along = dir.dot(normal);
            if along > 1e-12 {
                let t = offset / along;
                if t < best.0 {
                    best = (t, idx);
                }
            }
        }
        positions.push(Point3::origin() + dir * best.0);
        normals.push(faces[best.1].0);
    }
    Ok(PointCloud::with_unit_weights(positions, normals)?)
}

fn fibonacci_directions(count: usize) -> Vec<Vector3<f64>> {
    let golden = std::f64::consts::PI * (3.0 - 5.0_f64.sqrt());
    (0..count)
        .map(|i| {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / count as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let theta = golden * i as f64;
            Vector3::new(r * theta.cos(), r * theta.sin(), z)
        })
        .collect()
}
