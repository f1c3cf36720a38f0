//! Polygonal faces from solved vertices.
//!
//! Each proxy's face is the cycle of all vertices whose tuple contains the
//! proxy, ordered by angle around their barycenter within the proxy plane
//! and oriented so the polygon normal agrees with the proxy normal. Cycles
//! start at their smallest vertex index, which makes the output independent
//! of solver-internal vertex ordering.

use nalgebra::{Point3, Vector3};

use vsa_core::Segmentation;

use crate::types::{MeshWarning, SimplifiedMesh, SolvedVertices};

/// Assembles the final mesh: one angularly sorted, consistently oriented
/// face per proxy with at least three solved vertices, plus a corner-fan
/// triangulation.
pub(crate) fn build_faces(segmentation: &Segmentation, solved: SolvedVertices) -> SimplifiedMesh {
    let SolvedVertices {
        vertices,
        vertex_tuples,
        corrected_normals,
        feasible,
        mut warnings,
    } = solved;

    let mut faces = Vec::new();
    let mut face_proxies = Vec::new();
    let mut triangles = Vec::new();

    for proxy in 0..segmentation.proxy_count() {
        let members: Vec<usize> = (0..vertices.len())
            .filter(|&v| vertex_tuples[v].proxies.binary_search(&proxy).is_ok())
            .collect();
        if members.len() < 3 {
            warnings.push(MeshWarning::FaceSkipped {
                proxy,
                vertex_count: members.len(),
            });
            continue;
        }
        let normal = corrected_normals
            .as_ref()
            .map_or(segmentation.proxies[proxy].normal, |ns| ns[proxy]);
        let cycle = order_face(&vertices, &members, &normal);
        let planar = to_plane_coordinates(&vertices, &cycle, &normal);
        if has_proper_self_intersection(&planar) {
            warnings.push(MeshWarning::SelfIntersecting { proxy });
        }
        for t in 1..cycle.len() - 1 {
            triangles.push([cycle[0], cycle[t], cycle[t + 1]]);
        }
        faces.push(cycle);
        face_proxies.push(proxy);
    }

    SimplifiedMesh {
        vertices,
        vertex_tuples,
        faces,
        face_proxies,
        triangles,
        corrected_normals,
        feasible,
        warnings,
    }
}

/// Orders the proxy's vertices into a cycle: sorted by angle around the
/// barycenter in the proxy plane, oriented along the proxy normal, starting
/// at the smallest vertex index.
fn order_face(vertices: &[Point3<f64>], members: &[usize], normal: &Vector3<f64>) -> Vec<usize> {
    let (r, s) = plane_basis(normal);
    let mut barycenter = Vector3::zeros();
    for &v in members {
        barycenter += vertices[v].coords;
    }
    barycenter /= members.len() as f64;

    let mut cycle: Vec<usize> = members.to_vec();
    let angle = |v: usize| {
        let d = vertices[v].coords - barycenter;
        d.dot(&s).atan2(d.dot(&r))
    };
    cycle.sort_by(|&a, &b| {
        angle(a)
            .partial_cmp(&angle(b))
            .expect("angles are finite")
            .then(a.cmp(&b))
    });

    if newell_normal(vertices, &cycle).dot(normal) < 0.0 {
        cycle.reverse();
    }
    let start = cycle
        .iter()
        .enumerate()
        .min_by_key(|&(_, &v)| v)
        .map(|(idx, _)| idx)
        .expect("cycle is non-empty");
    cycle.rotate_left(start);
    cycle
}

/// An orthonormal in-plane basis `(r, s)` with `r x s = n`. `r` points along
/// the global axis least aligned with the normal, projected into the plane,
/// so the basis is stable under small normal changes.
fn plane_basis(normal: &Vector3<f64>) -> (Vector3<f64>, Vector3<f64>) {
    let n = normal.normalize();
    let mut axis = 0;
    for candidate in 1..3 {
        if n[candidate].abs() < n[axis].abs() {
            axis = candidate;
        }
    }
    let mut reference = Vector3::zeros();
    reference[axis] = 1.0;
    let r = (reference - n * n.dot(&reference)).normalize();
    let s = n.cross(&r);
    (r, s)
}

/// The area-weighted polygon normal; its sign encodes the winding.
fn newell_normal(vertices: &[Point3<f64>], cycle: &[usize]) -> Vector3<f64> {
    let mut n = Vector3::zeros();
    for (idx, &v) in cycle.iter().enumerate() {
        let a = vertices[v];
        let b = vertices[cycle[(idx + 1) % cycle.len()]];
        n.x += (a.y - b.y) * (a.z + b.z);
        n.y += (a.z - b.z) * (a.x + b.x);
        n.z += (a.x - b.x) * (a.y + b.y);
    }
    n
}

/// In-plane coordinates of the cycle's vertices.
fn to_plane_coordinates(
    vertices: &[Point3<f64>],
    cycle: &[usize],
    normal: &Vector3<f64>,
) -> Vec<[f64; 2]> {
    let (r, s) = plane_basis(normal);
    cycle
        .iter()
        .map(|&v| {
            let d = vertices[v].coords;
            [d.dot(&r), d.dot(&s)]
        })
        .collect()
}

/// Whether any two non-adjacent polygon edges properly cross. Touching at
/// endpoints or running collinearly does not count.
fn has_proper_self_intersection(polygon: &[[f64; 2]]) -> bool {
    let len = polygon.len();
    for i in 0..len {
        for j in i + 1..len {
            // Skip adjacent edge pairs, including the wrap-around pair.
            if j == i + 1 || (i == 0 && j == len - 1) {
                continue;
            }
            let (a, b) = (polygon[i], polygon[(i + 1) % len]);
            let (c, d) = (polygon[j], polygon[(j + 1) % len]);
            if segments_properly_cross(a, b, c, d) {
                return true;
            }
        }
    }
    false
}

fn segments_properly_cross(a: [f64; 2], b: [f64; 2], c: [f64; 2], d: [f64; 2]) -> bool {
    let orient = |p: [f64; 2], q: [f64; 2], r: [f64; 2]| {
        (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
    };
    let d1 = orient(c, d, a);
    let d2 = orient(c, d, b);
    let d3 = orient(a, b, c);
    let d4 = orient(a, b, d);
    d1 * d2 < 0.0 && d3 * d4 < 0.0
}
