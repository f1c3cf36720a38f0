//! OBJ point-cloud loading and mesh writing.
//!
//! For clouds, `v` and `vn` lines are paired by order and both are required
//! — the pipeline cannot run without oriented normals. For meshes, the
//! writer emits `v` lines followed by polygonal `f` lines in face order;
//! float formatting uses the shortest representation that round-trips, so
//! reloading reproduces the vertices exactly.

use std::fs;
use std::path::{Path, PathBuf};

use nalgebra::{Point3, Vector3};
use serde::{Deserialize, Serialize};

use vsa_core::PointCloud;
use vsa_simplify::{MeshWarning, SimplifiedMesh};

use crate::error::{CliError, CliResult};
use crate::ply::write_atomically;

/// Loads an oriented point cloud from an OBJ file with `v` and `vn` lines.
pub fn load_obj_cloud(path: &Path) -> CliResult<PointCloud> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Data(format!("cannot read {}: {e}", path.display())))?;
    let mut positions = Vec::new();
    let mut normals = Vec::new();
    for (index, line) in text.lines().enumerate() {
        let line_no = index + 1;
        let mut tokens = line.split_whitespace();
        let Some(keyword) = tokens.next() else {
            continue;
        };
        match keyword {
            "v" => positions.push(Point3::from(parse_triplet(
                path,
                line_no,
                &mut tokens,
            )?)),
            "vn" => normals.push(Vector3::from(parse_triplet(path, line_no, &mut tokens)?)),
            // Faces, texture coordinates, groups, materials and comments
            // carry no cloud data.
            _ => {}
        }
    }
    if positions.is_empty() {
        return Err(CliError::Data(format!(
            "{}: no `v` lines found",
            path.display()
        )));
    }
    if normals.is_empty() {
        return Err(CliError::Data(format!(
            "{}: normals required — the file has `v` lines but no `vn` lines",
            path.display()
        )));
    }
    if normals.len() != positions.len() {
        return Err(CliError::Data(format!(
            "{}: {} `v` lines vs {} `vn` lines; clouds pair them one to one",
            path.display(),
            positions.len(),
            normals.len()
        )));
    }
    PointCloud::with_unit_weights(positions, normals)
        .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

fn parse_triplet<'a>(
    path: &Path,
    line_no: usize,
    tokens: &mut impl Iterator<Item = &'a str>,
) -> CliResult<[f64; 3]> {
    let mut out = [0.0; 3];
    for slot in &mut out {
        let token = tokens.next().ok_or_else(|| {
            CliError::Data(format!(
                "{}:{line_no}: expected three coordinates",
                path.display()
            ))
        })?;
        *slot = token.parse::<f64>().map_err(|_| {
            CliError::Data(format!(
                "{}:{line_no}: expected a number, found '{token}'",
                path.display()
            ))
        })?;
        if !slot.is_finite() {
            return Err(CliError::Data(format!(
                "{}:{line_no}: non-finite coordinate '{token}'",
                path.display()
            )));
        }
    }
    Ok(out)
}

/// Writes the mesh as OBJ: all `v` lines, then one polygonal `f` line per
/// face (1-based indices), in face order.
pub fn save_mesh_obj(mesh: &SimplifiedMesh, path: &Path) -> CliResult<()> {
    let mut out = String::new();
    for v in &mesh.vertices {
        out.push_str(&format!("v {} {} {}\n", v.x, v.y, v.z));
    }
    for face in &mesh.faces {
        out.push('f');
        for &v in face {
            out.push_str(&format!(" {}", v + 1));
        }
        out.push('\n');
    }
    write_atomically(path, out.as_bytes())
}

/// A mesh reloaded from OBJ: vertices plus 0-based face cycles.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjMesh {
    pub vertices: Vec<Point3<f64>>,
    pub faces: Vec<Vec<usize>>,
}

/// Loads vertices and faces back from an OBJ file (inverse of
/// [`save_mesh_obj`] on its own output).
pub fn load_obj_mesh(path: &Path) -> CliResult<ObjMesh> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Data(format!("cannot read {}: {e}", path.display())))?;
    let mut vertices = Vec::new();
    let mut faces = Vec::new();
    for (index, line) in text.lines().enumerate() {
        let line_no = index + 1;
        let mut tokens = line.split_whitespace();
        match tokens.next() {
            Some("v") => vertices.push(Point3::from(parse_triplet(path, line_no, &mut tokens)?)),
            Some("f") => {
                let mut face = Vec::new();
                for token in tokens {
                    // `f` entries may be `v`, `v/vt`, `v//vn`, ...; the
                    // vertex index is the part before the first slash.
                    let vertex = token.split('/').next().unwrap_or(token);
                    let parsed = vertex.parse::<i64>().map_err(|_| {
                        CliError::Data(format!(
                            "{}:{line_no}: bad face index '{token}'",
                            path.display()
                        ))
                    })?;
                    if parsed < 1 || parsed as usize > vertices.len() {
                        return Err(CliError::Data(format!(
                            "{}:{line_no}: face index {parsed} outside 1..={}",
                            path.display(),
                            vertices.len()
                        )));
                    }
                    face.push(parsed as usize - 1);
                }
                if face.len() < 3 {
                    return Err(CliError::Data(format!(
                        "{}:{line_no}: face has fewer than three vertices",
                        path.display()
                    )));
                }
                faces.push(face);
            }
            _ => {}
        }
    }
    Ok(ObjMesh { vertices, faces })
}

/// Serializable counterpart of [`MeshWarning`] for the sidecar report.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WarningRecord {
    TupleSkipped { proxies: Vec<usize>, reason: String },
    FaceSkipped { proxy: usize, vertex_count: usize },
    SelfIntersecting { proxy: usize },
}

impl From<&MeshWarning> for WarningRecord {
    fn from(warning: &MeshWarning) -> Self {
        match warning {
            MeshWarning::TupleSkipped { proxies, reason } => WarningRecord::TupleSkipped {
                proxies: proxies.clone(),
                reason: reason.clone(),
            },
            MeshWarning::FaceSkipped {
                proxy,
                vertex_count,
            } => WarningRecord::FaceSkipped {
                proxy: *proxy,
                vertex_count: *vertex_count,
            },
            MeshWarning::SelfIntersecting { proxy } => {
                WarningRecord::SelfIntersecting { proxy: *proxy }
            }
        }
    }
}

/// Mesh-extraction outcome facts that do not fit in the OBJ itself.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MeshReport {
    pub vertex_count: usize,
    pub face_count: usize,
    pub triangle_count: usize,
    /// Whether the vertex solver met its constraint tolerance.
    pub feasible: bool,
    pub warnings: Vec<WarningRecord>,
}

impl MeshReport {
    pub fn of(mesh: &SimplifiedMesh) -> Self {
        MeshReport {
            vertex_count: mesh.vertices.len(),
            face_count: mesh.faces.len(),
            triangle_count: mesh.triangles.len(),
            feasible: mesh.feasible,
            warnings: mesh.warnings.iter().map(WarningRecord::from).collect(),
        }
    }
}

/// The sidecar path of a mesh: `mesh.obj` → `mesh.report.json`.
pub fn report_path(mesh_path: &Path) -> PathBuf {
    mesh_path.with_extension("report.json")
}

/// Writes the warning/feasibility sidecar next to the mesh.
pub fn save_mesh_report(mesh: &SimplifiedMesh, mesh_path: &Path) -> CliResult<()> {
    let report = MeshReport::of(mesh);
    let json = serde_json::to_string_pretty(&report)?;
    write_atomically(&report_path(mesh_path), json.as_bytes())
}
