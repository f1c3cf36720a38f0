//! The mesh-extraction entry point.

use vsa_core::{NeighborGraph, PointCloud, Segmentation};
use vsa_segmentation::proxy_adjacency;

use crate::error::{SimplifyError, SimplifyResult};
use crate::faces::build_faces;
use crate::naive::solve_vertices_naive;
use crate::optimize::solve_vertices_optimized;
use crate::tuples::enumerate_q_tuples;
use crate::types::{SimplifiedMesh, SolverConfig, Strategy};

/// Extracts the simplified polygonal mesh of a segmented cloud.
///
/// Adjacent-proxy cliques become vertex tuples, the chosen strategy turns
/// each tuple into a vertex (and, when optimizing, corrects the proxy
/// normals so faces come out planar), and every proxy with at least three
/// vertices contributes one polygonal face. The graph must be the one the
/// segmentation was computed on, as it defines proxy adjacency.
pub fn simplify(
    cloud: &PointCloud,
    graph: &NeighborGraph,
    segmentation: &Segmentation,
    strategy: Strategy,
    config: &SolverConfig,
) -> SimplifyResult<SimplifiedMesh> {
    if graph.len() != cloud.len() {
        return Err(SimplifyError::InconsistentInput {
            reason: format!(
                "neighbor graph covers {} points but the cloud has {}",
                graph.len(),
                cloud.len()
            ),
        });
    }
    segmentation.validate_complete(cloud)?;
    config.validate(segmentation.proxy_count())?;

    let adjacency = proxy_adjacency(graph, segmentation);
    let tuples = enumerate_q_tuples(segmentation.proxy_count(), &adjacency);
    let solved = match strategy {
        Strategy::Intersect => solve_vertices_naive(cloud, segmentation, &tuples)?,
        Strategy::Optimize => solve_vertices_optimized(cloud, segmentation, &tuples, config)?,
    };
    Ok(build_faces(segmentation, solved))
}
