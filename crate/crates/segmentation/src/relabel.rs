//! Re-interpreting proxies as connected regions.
//!
//! Single-point reassignments can strand parts of a proxy: the member set
//! stays optimal energy-wise but is no longer connected on the neighbor
//! graph. This pass cuts every proxy into its connected components (over
//! the symmetrized graph restricted to same-proxy members) and refits one
//! proxy per component.

use vsa_core::{NeighborGraph, PointCloud, Proxy, Segmentation};

use crate::error::SegmentationResult;

/// Replaces every proxy by one fitted proxy per connected component of its
/// member set. Returns the number of proxies afterwards.
///
/// Renumbering is deterministic: for each original proxy (in id order) the
/// component containing its smallest member keeps the original slot; all
/// remaining components are appended after the original slots, ordered by
/// (original proxy id, smallest member).
pub fn relabel_components(
    cloud: &PointCloud,
    graph: &NeighborGraph,
    segmentation: &mut Segmentation,
) -> SegmentationResult<usize> {
    let mut replacements: Vec<Vec<usize>> = Vec::with_capacity(segmentation.proxy_count());
    let mut extras: Vec<Vec<usize>> = Vec::new();
    for proxy in &segmentation.proxies {
        let mut components = member_components(graph, &proxy.members, &segmentation.assignment);
        // Components come out ordered by smallest member already; the first
        // inherits the proxy's slot.
        replacements.push(components.remove(0));
        extras.extend(components);
    }

    let mut proxies = Vec::with_capacity(replacements.len() + extras.len());
    for members in replacements.into_iter().chain(extras) {
        let id = proxies.len();
        proxies.push(Proxy::fit(cloud, id, members)?);
    }
    for proxy in &proxies {
        for &j in &proxy.members {
            segmentation.assignment[j] = Some(proxy.id);
        }
    }
    segmentation.proxies = proxies;
    Ok(segmentation.proxy_count())
}

/// Connected components of `members` under the symmetric graph restricted
/// to points with the same assignment, each sorted ascending, the list
/// ordered by smallest member.
fn member_components(
    graph: &NeighborGraph,
    members: &[usize],
    assignment: &[Option<usize>],
) -> Vec<Vec<usize>> {
    let mut visited: std::collections::BTreeSet<usize> = members.iter().copied().collect();
    let label = members.first().and_then(|&j| assignment[j]);
    let mut components = Vec::new();
    // Members are sorted, so iterating them in order yields components
    // ordered by their smallest member.
    for &start in members {
        if !visited.contains(&start) {
            continue;
        }
        let mut component = Vec::new();
        let mut stack = vec![start];
        visited.remove(&start);
        while let Some(j) = stack.pop() {
            component.push(j);
            for &neighbor in graph.symmetric_neighbors(j) {
                if assignment[neighbor] == label && visited.remove(&neighbor) {
                    stack.push(neighbor);
                }
            }
        }
        component.sort_unstable();
        components.push(component);
    }
    components
}
