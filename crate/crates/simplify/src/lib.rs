//! Simplified polygonal meshes from planar-proxy segmentations.
//!
//! A segmentation covers the cloud with planar proxies; this crate turns
//! those planes into a small polygonal mesh. Wherever three or more
//! mutually adjacent proxies meet — an inclusion-maximal clique of the proxy
//! adjacency graph, called a tuple — their planes intersect in one mesh
//! vertex. Vertices come from one of two strategies:
//!
//! * [`Strategy::Intersect`] solves each tuple independently from its three
//!   best-conditioned planes, skipping tuples whose planes are nearly
//!   parallel or whose intersection lands far from the data.
//! * [`Strategy::Optimize`] solves all vertices and slightly corrected proxy
//!   normals in one constrained problem, so that every vertex lies exactly
//!   on all of its proxies' planes and every face is planar — including
//!   vertices where more than three proxies meet.
//!
//! Each proxy with at least three vertices then yields one polygonal face,
//! angularly ordered, oriented along the proxy normal and fanned into
//! triangles. [`simplify`] runs the whole chain.

mod assemble;
mod error;
mod faces;
mod intersect;
mod naive;
mod optimize;
mod tuples;
mod types;

pub use assemble::simplify;
pub use error::{SimplifyError, SimplifyResult};
pub use intersect::{intersect_three_planes, NEAR_PARALLEL_RATIO};
pub use naive::DISTANCE_CUTOFF_FACTOR;
pub use optimize::{
    minimize_constrained, ConstrainedProblem, Multipliers, SolvedProblem, MU_GROWTH, MU_INITIAL,
};
pub use tuples::enumerate_q_tuples;
pub use types::{MeshWarning, QTuple, SimplifiedMesh, SolverConfig, Strategy, Wtilde};
