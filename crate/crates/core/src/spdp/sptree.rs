//! Two-terminal series-parallel recognition by repeated series and parallel reductions.

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::graph::{EdgeId, MultiGraph, NodeId};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpKind {
    Leaf(EdgeId),
    /// Children share the middle node; the first child touches `s`.
    Series(usize, usize, NodeId),
    Parallel(usize, usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SpNode {
    pub kind: SpKind,
    pub s: NodeId,
    pub t: NodeId,
}

/// Binary SP-tree stored children before parents; the last node is the root.
#[derive(Clone, Debug)]
pub struct SPTree {
    pub nodes: Vec<SpNode>,
}

impl SPTree {
    pub fn root(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn terminals(&self) -> (NodeId, NodeId) {
        let r = &self.nodes[self.root()];
        (r.s, r.t)
    }

    pub fn leaves(&self) -> impl Iterator<Item = (EdgeId, NodeId, NodeId)> + '_ {
        self.nodes.iter().filter_map(|n| match n.kind {
            SpKind::Leaf(e) => Some((e, n.s, n.t)),
            _ => None,
        })
    }

    /// Rebuild the graph from the tree: one edge per leaf, endpoints as recorded.
    pub fn compose(&self, node_count: usize) -> Vec<(EdgeId, NodeId, NodeId)> {
        let mut out: Vec<_> = self.leaves().collect();
        out.sort();
        debug_assert!(out.iter().all(|&(_, u, v)| u < node_count && v < node_count));
        out
    }
}

/// SP-tree of `g` with terminals (`s`, `t`), using every edge of `g`.
pub fn recognize_sp(g: &MultiGraph, s: NodeId, t: NodeId) -> Result<SPTree> {
    let edges: Vec<EdgeId> = (0..g.edge_count()).collect();
    if (0..g.node_count()).any(|v| g.degree(v) == 0) {
        return Err(Error::NotSeriesParallel(s, t));
    }
    recognize_sp_on(g, &edges, s, t)
}

/// SP-tree of the subgraph formed by `edges`, with terminals (`s`, `t`).
pub fn recognize_sp_on(g: &MultiGraph, edges: &[EdgeId], s: NodeId, t: NodeId) -> Result<SPTree> {
    let n = g.node_count();
    if s == t || s >= n || t >= n {
        return Err(Error::InvalidInput(format!("terminals ({s}, {t}) must be distinct nodes")));
    }
    if edges.is_empty() {
        return Err(Error::NotSeriesParallel(s, t));
    }
    let key = |u: NodeId, v: NodeId| (u.min(v), u.max(v));
    let mut nodes: Vec<SpNode> = Vec::with_capacity(2 * edges.len());
    // live virtual edges: (u, v, tree node)
    let mut virt: Vec<Option<(NodeId, NodeId, usize)>> = Vec::with_capacity(2 * edges.len());
    let mut inc: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut deg = vec![0usize; n];
    let mut pairs: HashMap<(NodeId, NodeId), Vec<usize>> = HashMap::new();
    let mut par_queue: VecDeque<(NodeId, NodeId)> = VecDeque::new();
    let mut ser_queue: VecDeque<NodeId> = VecDeque::new();

    let add_virtual = |virt: &mut Vec<Option<(NodeId, NodeId, usize)>>,
                       inc: &mut Vec<Vec<usize>>,
                       deg: &mut Vec<usize>,
                       pairs: &mut HashMap<(NodeId, NodeId), Vec<usize>>,
                       par_queue: &mut VecDeque<(NodeId, NodeId)>,
                       u: NodeId,
                       v: NodeId,
                       node: usize| {
        let id = virt.len();
        virt.push(Some((u, v, node)));
        inc[u].push(id);
        inc[v].push(id);
        deg[u] += 1;
        deg[v] += 1;
        let list = pairs.entry(key(u, v)).or_default();
        list.push(id);
        if list.len() == 2 {
            par_queue.push_back(key(u, v));
        }
    };

    for &e in edges {
        let (u, v) = g.endpoints(e);
        if u == v {
            return Err(Error::InvalidInput(format!("self-loop {e} in series-parallel input")));
        }
        nodes.push(SpNode { kind: SpKind::Leaf(e), s: u, t: v });
        add_virtual(&mut virt, &mut inc, &mut deg, &mut pairs, &mut par_queue, u, v, nodes.len() - 1);
    }
    ser_queue.extend((0..n).filter(|&v| deg[v] == 2));
    let mut live = edges.len();

    loop {
        if let Some(p) = par_queue.pop_front() {
            loop {
                let list = pairs.get_mut(&p).expect("queued pair exists");
                if list.len() < 2 {
                    break;
                }
                let a = list.pop().unwrap();
                let b = list.pop().unwrap();
                let (u, v, na) = virt[a].take().unwrap();
                let (_, _, nb) = virt[b].take().unwrap();
                nodes.push(SpNode { kind: SpKind::Parallel(na, nb), s: u, t: v });
                deg[u] -= 2;
                deg[v] -= 2;
                live -= 1;
                add_virtual(&mut virt, &mut inc, &mut deg, &mut pairs, &mut par_queue, u, v, nodes.len() - 1);
                for x in [u, v] {
                    if deg[x] == 2 {
                        ser_queue.push_back(x);
                    }
                }
            }
            continue;
        }
        let Some(x) = ser_queue.pop_front() else { break };
        if x == s || x == t || deg[x] != 2 {
            continue;
        }
        inc[x].retain(|&id| virt[id].is_some());
        let (a, b) = (inc[x][0], inc[x][1]);
        let (au, av, na) = virt[a].take().unwrap();
        let (bu, bv, nb) = virt[b].take().unwrap();
        let u = if au == x { av } else { au };
        let w = if bu == x { bv } else { bu };
        for (id, p, q) in [(a, au, av), (b, bu, bv)] {
            let list = pairs.get_mut(&key(p, q)).unwrap();
            list.retain(|&y| y != id);
        }
        deg[x] = 0;
        deg[u] -= 1;
        deg[w] -= 1;
        live -= 1;
        nodes.push(SpNode { kind: SpKind::Series(na, nb, x), s: u, t: w });
        add_virtual(&mut virt, &mut inc, &mut deg, &mut pairs, &mut par_queue, u, w, nodes.len() - 1);
        for y in [u, w] {
            if deg[y] == 2 {
                ser_queue.push_back(y);
            }
        }
    }

    if live != 1 {
        return Err(Error::NotSeriesParallel(s, t));
    }
    let (u, v, root) = virt.iter().flatten().copied().next().unwrap();
    if key(u, v) != key(s, t) {
        return Err(Error::NotSeriesParallel(s, t));
    }
    debug_assert_eq!(root, nodes.len() - 1);
    if nodes[root].s != s {
        let r = &mut nodes[root];
        std::mem::swap(&mut r.s, &mut r.t);
        if let SpKind::Series(a, b, m) = r.kind {
            r.kind = SpKind::Series(b, a, m);
        }
    }
    Ok(SPTree { nodes })
}

/// SP-tree for some terminal pair: endpoints of each edge first, then all node pairs.
pub fn recognize_sp_any(g: &MultiGraph) -> Result<SPTree> {
    let n = g.node_count();
    if n < 2 || g.edge_count() == 0 {
        return Err(Error::NotSeriesParallel(0, 0));
    }
    let mut tried = std::collections::HashSet::new();
    let candidates = g
        .edges()
        .iter()
        .map(|&(u, v)| (u.min(v), u.max(v)))
        .chain((0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))));
    for (u, v) in candidates {
        if u == v || !tried.insert((u, v)) {
            continue;
        }
        if let Ok(tree) = recognize_sp(g, u, v) {
            return Ok(tree);
        }
    }
    Err(Error::NotSeriesParallel(0, 0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_edge_is_a_leaf() {
        let g = MultiGraph::from_edges(2, &[(0, 1)]);
        let t = recognize_sp(&g, 0, 1).unwrap();
        assert_eq!(t.nodes.len(), 1);
        assert_eq!(t.nodes[0].kind, SpKind::Leaf(0));
        assert_eq!(t.terminals(), (0, 1));
        assert_eq!(recognize_sp(&g, 1, 0).unwrap().terminals(), (1, 0));
    }

    #[test]
    fn theta_graph() {
        let g = MultiGraph::from_edges(5, &[(0, 2), (2, 1), (0, 3), (3, 1), (0, 4), (4, 1)]);
        let t = recognize_sp(&g, 0, 1).unwrap();
        let root = t.nodes[t.root()];
        assert!(matches!(root.kind, SpKind::Parallel(..)));
        assert_eq!(t.nodes.iter().filter(|n| matches!(n.kind, SpKind::Series(..))).count(), 3);
        assert_eq!(t.leaves().count(), 6);
        assert_eq!(t.compose(5).len(), 6);
    }

    #[test]
    fn k4_is_rejected() {
        let g = MultiGraph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        for (u, v) in [(0, 1), (0, 2), (2, 3)] {
            assert!(matches!(recognize_sp(&g, u, v), Err(Error::NotSeriesParallel(..))));
        }
        assert!(recognize_sp_any(&g).is_err());
    }

    #[test]
    fn path_needs_its_ends() {
        let g = MultiGraph::from_edges(3, &[(0, 1), (1, 2)]);
        assert!(recognize_sp(&g, 0, 1).is_err());
        assert!(recognize_sp(&g, 0, 2).is_ok());
        assert_eq!(recognize_sp_any(&g).unwrap().terminals(), (0, 2));
        let star = MultiGraph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]);
        assert!(recognize_sp_any(&star).is_err());
    }
}
