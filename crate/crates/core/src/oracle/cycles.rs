//! Backtracking enumeration of simple cycles and simple paths in multigraphs.

use crate::error::{Error, Result};
use crate::graph::{EdgeId, EdgeSet, MultiGraph, NodeId};

/// Every simple cycle exactly once, as an edge set. Bigons count, self-loops do not.
/// Fails when the graph has more than `edge_guard` edges.
pub fn enum_simple_cycles(g: &MultiGraph, edge_guard: usize) -> Result<Vec<EdgeSet>> {
    if g.edge_count() > edge_guard {
        return Err(Error::GuardExceeded { what: "edges for cycle enumeration".into(), size: g.edge_count(), limit: edge_guard });
    }
    let mut out = Vec::new();
    let n = g.node_count();
    let mut on_path = vec![false; n];
    let mut path: Vec<EdgeId> = Vec::new();
    for s in 0..n {
        on_path[s] = true;
        extend_cycle(g, s, s, &mut on_path, &mut path, &mut out);
        on_path[s] = false;
    }
    out.sort();
    Ok(out)
}

fn extend_cycle(g: &MultiGraph, s: NodeId, v: NodeId, on_path: &mut [bool], path: &mut Vec<EdgeId>, out: &mut Vec<EdgeSet>) {
    for &(e, u) in g.incident(v) {
        if u == v || path.last() == Some(&e) {
            continue;
        }
        if u == s {
            if !path.is_empty() && path[0] < e {
                let mut c = EdgeSet::from_ids(g.edge_count(), path.iter().copied());
                c.insert(e);
                out.push(c);
            }
            continue;
        }
        if u < s || on_path[u] {
            continue;
        }
        on_path[u] = true;
        path.push(e);
        extend_cycle(g, s, u, on_path, path, out);
        path.pop();
        on_path[u] = false;
    }
}

/// All simple paths from `s` to `t` as edge lists, using only edges in `allowed`
/// (all edges when `None`). For `s == t` the single empty path is returned.
pub fn enum_simple_paths(g: &MultiGraph, s: NodeId, t: NodeId, allowed: Option<&EdgeSet>) -> Vec<Vec<EdgeId>> {
    let mut out = Vec::new();
    if s == t {
        out.push(Vec::new());
        return out;
    }
    let mut on_path = vec![false; g.node_count()];
    on_path[s] = true;
    let mut path = Vec::new();
    extend_path(g, t, s, allowed, &mut on_path, &mut path, &mut |p| out.push(p.to_vec()));
    out
}

/// Number of simple paths from `s` to `t`.
pub fn count_simple_paths(g: &MultiGraph, s: NodeId, t: NodeId, allowed: Option<&EdgeSet>) -> u64 {
    if s == t {
        return 1;
    }
    let mut on_path = vec![false; g.node_count()];
    on_path[s] = true;
    let mut path = Vec::new();
    let mut count = 0u64;
    extend_path(g, t, s, allowed, &mut on_path, &mut path, &mut |_| count += 1);
    count
}

fn extend_path(
    g: &MultiGraph,
    t: NodeId,
    v: NodeId,
    allowed: Option<&EdgeSet>,
    on_path: &mut [bool],
    path: &mut Vec<EdgeId>,
    visit: &mut dyn FnMut(&[EdgeId]),
) {
    for &(e, u) in g.incident(v) {
        if u == v || on_path[u] || allowed.is_some_and(|a| !a.contains(e)) {
            continue;
        }
        path.push(e);
        if u == t {
            visit(path);
        } else {
            on_path[u] = true;
            extend_path(g, t, u, allowed, on_path, path, visit);
            on_path[u] = false;
        }
        path.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cycle_counts() {
        let tree = MultiGraph::from_edges(4, &[(0, 1), (1, 2), (1, 3)]);
        assert!(enum_simple_cycles(&tree, 30).unwrap().is_empty());
        let k4 = MultiGraph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        let cycles = enum_simple_cycles(&k4, 30).unwrap();
        assert_eq!(cycles.len(), 7);
        assert_eq!(cycles.iter().filter(|c| c.count() == 3).count(), 4);
        let bigon = MultiGraph::from_edges(2, &[(0, 1), (0, 1)]);
        assert_eq!(enum_simple_cycles(&bigon, 30).unwrap().len(), 1);
        let lp = MultiGraph::from_edges(1, &[(0, 0)]);
        assert!(enum_simple_cycles(&lp, 30).unwrap().is_empty());
    }

    #[test]
    fn cycles_are_distinct_and_two_regular() {
        let g = MultiGraph::from_edges(4, &[(0, 1), (0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (1, 3)]);
        let cycles = enum_simple_cycles(&g, 30).unwrap();
        let mut dedup = cycles.clone();
        dedup.dedup();
        assert_eq!(dedup.len(), cycles.len());
        for c in &cycles {
            let mut deg = [0usize; 4];
            for e in c.iter() {
                let (a, b) = g.endpoints(e);
                deg[a] += 1;
                deg[b] += 1;
            }
            assert!(deg.iter().all(|&d| d == 0 || d == 2));
            assert!(crate::graph::is_in_e2(&g, c));
        }
    }

    #[test]
    fn guard_is_enforced() {
        let g = MultiGraph::from_edges(2, &[(0, 1); 5]);
        assert!(enum_simple_cycles(&g, 4).is_err());
        assert_eq!(enum_simple_cycles(&g, 5).unwrap().len(), 10);
    }

    #[test]
    fn path_counts() {
        let k4 = MultiGraph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        assert_eq!(count_simple_paths(&k4, 0, 1, None), 5);
        assert_eq!(enum_simple_paths(&k4, 0, 1, None).len(), 5);
        assert_eq!(count_simple_paths(&k4, 2, 2, None), 1);
    }
}
