//! Domain types of the mesh-extraction stage.

use nalgebra::{Point3, Vector3};

use crate::error::{SimplifyError, SimplifyResult};

/// A set of at least three pairwise-adjacent proxies whose planes meet in a
/// mesh vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QTuple {
    /// Sorted, distinct proxy ids forming a maximal clique in the proxy
    /// adjacency graph.
    pub proxies: Vec<usize>,
}

impl QTuple {
    /// Number of proxies meeting at the vertex.
    pub fn q(&self) -> usize {
        self.proxies.len()
    }
}

/// How vertex positions are computed from the proxy planes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    /// Intersect three well-conditioned planes per tuple directly.
    Intersect,
    /// Solve one coupled constrained problem for all vertices and slightly
    /// corrected proxy normals, guaranteeing planar faces.
    #[default]
    Optimize,
}

/// Per-proxy weights that penalize deviating from the fitted normals.
#[derive(Debug, Clone, PartialEq)]
pub enum Wtilde {
    /// The same weight for every proxy.
    Uniform(f64),
    /// One weight per proxy, indexed by proxy id.
    PerProxy(Vec<f64>),
}

impl Wtilde {
    pub fn get(&self, proxy: usize) -> f64 {
        match self {
            Wtilde::Uniform(w) => *w,
            Wtilde::PerProxy(ws) => ws[proxy],
        }
    }

    fn validate(&self, proxy_count: usize) -> SimplifyResult<()> {
        match self {
            Wtilde::Uniform(w) => {
                if !(w.is_finite() && *w >= 0.0) {
                    return Err(SimplifyError::InvalidConfig {
                        reason: format!("normal-deviation weight must be non-negative, got {w}"),
                    });
                }
            }
            Wtilde::PerProxy(ws) => {
                if ws.len() != proxy_count {
                    return Err(SimplifyError::InvalidConfig {
                        reason: format!(
                            "{} per-proxy weights supplied for {proxy_count} proxies",
                            ws.len()
                        ),
                    });
                }
                if let Some(w) = ws.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
                    return Err(SimplifyError::InvalidConfig {
                        reason: format!("normal-deviation weight must be non-negative, got {w}"),
                    });
                }
            }
        }
        Ok(())
    }
}

/// Parameters of the constrained vertex solver.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Penalty on corrected normals deviating from the fitted ones.
    pub wtilde: Wtilde,
    /// Maximum outer multiplier updates.
    pub max_outer: usize,
    /// Largest tolerated constraint residual at the solution.
    pub constraint_tol: f64,
    /// Inner iteration stops when steps shrink below this length.
    pub step_tol: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            wtilde: Wtilde::Uniform(1.0),
            max_outer: 50,
            constraint_tol: 1e-6,
            step_tol: 1e-10,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self, proxy_count: usize) -> SimplifyResult<()> {
        self.wtilde.validate(proxy_count)?;
        if self.max_outer == 0 {
            return Err(SimplifyError::InvalidConfig {
                reason: "solver needs at least one outer iteration".into(),
            });
        }
        if !(self.constraint_tol.is_finite() && self.constraint_tol > 0.0) {
            return Err(SimplifyError::InvalidConfig {
                reason: format!(
                    "constraint tolerance must be positive, got {}",
                    self.constraint_tol
                ),
            });
        }
        if !(self.step_tol.is_finite() && self.step_tol > 0.0) {
            return Err(SimplifyError::InvalidConfig {
                reason: format!("step tolerance must be positive, got {}", self.step_tol),
            });
        }
        Ok(())
    }
}

/// Non-fatal defects encountered while extracting the mesh.
#[derive(Debug, Clone, PartialEq)]
pub enum MeshWarning {
    /// No reliable vertex could be built for this tuple.
    TupleSkipped { proxies: Vec<usize>, reason: String },
    /// The proxy gathered fewer than three vertices, so it emits no face.
    FaceSkipped { proxy: usize, vertex_count: usize },
    /// The proxy's polygon self-intersects (its region is not star-convex
    /// around the vertex barycenter); the face is still emitted.
    SelfIntersecting { proxy: usize },
}

/// Output of a vertex-position solver, before faces are assembled.
#[derive(Debug, Clone)]
pub(crate) struct SolvedVertices {
    /// Solved vertex positions, one per kept tuple.
    pub vertices: Vec<Point3<f64>>,
    /// The tuple behind each vertex, parallel to `vertices`.
    pub vertex_tuples: Vec<QTuple>,
    /// Corrected per-proxy normals; `None` on the direct-intersection path.
    pub corrected_normals: Option<Vec<Vector3<f64>>>,
    /// Whether the solver met its constraint tolerance.
    pub feasible: bool,
    /// Defects encountered while solving, in discovery order.
    pub warnings: Vec<MeshWarning>,
}

/// The simplified polygonal mesh extracted from a segmentation.
#[derive(Debug, Clone, Default)]
pub struct SimplifiedMesh {
    /// Solved vertex positions, one per kept tuple.
    pub vertices: Vec<Point3<f64>>,
    /// The tuple behind each vertex, parallel to `vertices`.
    pub vertex_tuples: Vec<QTuple>,
    /// One vertex-index cycle per emitted proxy face.
    pub faces: Vec<Vec<usize>>,
    /// The proxy behind each face, parallel to `faces`.
    pub face_proxies: Vec<usize>,
    /// Corner-fan triangulation of every face (a q-gon contributes q - 2
    /// triangles).
    pub triangles: Vec<[usize; 3]>,
    /// Corrected per-proxy normals; present on the optimization path only.
    pub corrected_normals: Option<Vec<Vector3<f64>>>,
    /// Whether the vertex solver met its constraint tolerance. Always true
    /// on the direct-intersection path.
    pub feasible: bool,
    /// Non-fatal defects, in discovery order.
    pub warnings: Vec<MeshWarning>,
}

impl SimplifiedMesh {
    /// Vertex indices attached to the given proxy, in vertex order.
    pub fn vertices_of_proxy(&self, proxy: usize) -> Vec<usize> {
        (0..self.vertices.len())
            .filter(|&v| self.vertex_tuples[v].proxies.binary_search(&proxy).is_ok())
            .collect()
    }
}
