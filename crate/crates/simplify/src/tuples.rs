//! Maximal-clique enumeration over the proxy adjacency graph.
//!
//! A mesh vertex arises where at least three proxy planes meet, and the
//! candidate plane sets are exactly the maximal cliques of the proxy
//! adjacency graph: taking a non-maximal set would duplicate a vertex that a
//! larger set already describes.

use std::collections::BTreeSet;

use crate::types::QTuple;

/// Enumerates all maximal cliques of size at least three, sorted
/// lexicographically by member ids.
pub fn enumerate_q_tuples(proxy_count: usize, adjacency: &BTreeSet<(usize, usize)>) -> Vec<QTuple> {
    let mut neighbors = vec![BTreeSet::new(); proxy_count];
    for &(a, b) in adjacency {
        if a < proxy_count && b < proxy_count && a != b {
            neighbors[a].insert(b);
            neighbors[b].insert(a);
        }
    }
    let mut cliques = Vec::new();
    let mut current = Vec::new();
    let candidates: BTreeSet<usize> = (0..proxy_count).collect();
    bron_kerbosch(
        &neighbors,
        &mut current,
        candidates,
        BTreeSet::new(),
        &mut cliques,
    );
    cliques.sort();
    cliques
        .into_iter()
        .map(|proxies| QTuple { proxies })
        .collect()
}

/// Classic branch-and-bound clique enumeration with pivoting: only
/// candidates outside the pivot's neighborhood spawn branches, which prunes
/// the search without losing any maximal clique.
fn bron_kerbosch(
    neighbors: &[BTreeSet<usize>],
    current: &mut Vec<usize>,
    mut candidates: BTreeSet<usize>,
    mut excluded: BTreeSet<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if candidates.is_empty() && excluded.is_empty() {
        if current.len() >= 3 {
            let mut clique = current.clone();
            clique.sort_unstable();
            out.push(clique);
        }
        return;
    }
    let pivot = candidates
        .iter()
        .chain(excluded.iter())
        .copied()
        .max_by_key(|&u| (candidates.intersection(&neighbors[u]).count(), usize::MAX - u))
        .expect("at least one of the sets is non-empty");
    let branches: Vec<usize> = candidates.difference(&neighbors[pivot]).copied().collect();
    for v in branches {
        current.push(v);
        let next_candidates = candidates.intersection(&neighbors[v]).copied().collect();
        let next_excluded = excluded.intersection(&neighbors[v]).copied().collect();
        bron_kerbosch(neighbors, current, next_candidates, next_excluded, out);
        current.pop();
        candidates.remove(&v);
        excluded.insert(v);
    }
}
