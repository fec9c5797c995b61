//! Multigraphs with stable edge ids, edge bitsets and basic invariants.

use crate::error::{Error, Result};

pub type NodeId = usize;
pub type EdgeId = usize;

/// Bitset over the edge ids of a graph.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct EdgeSet {
    len: usize,
    words: Vec<u64>,
}

impl EdgeSet {
    pub fn new(len: usize) -> Self {
        EdgeSet { len, words: vec![0; len.div_ceil(64)] }
    }

    pub fn full(len: usize) -> Self {
        let mut s = Self::new(len);
        for e in 0..len {
            s.insert(e);
        }
        s
    }

    pub fn from_ids<I: IntoIterator<Item = EdgeId>>(len: usize, ids: I) -> Self {
        let mut s = Self::new(len);
        for e in ids {
            s.insert(e);
        }
        s
    }

    /// Universe size (number of edge ids), not the cardinality.
    pub fn universe(&self) -> usize {
        self.len
    }

    pub fn insert(&mut self, e: EdgeId) {
        assert!(e < self.len, "edge id {e} out of range {}", self.len);
        self.words[e / 64] |= 1 << (e % 64);
    }

    pub fn remove(&mut self, e: EdgeId) {
        assert!(e < self.len, "edge id {e} out of range {}", self.len);
        self.words[e / 64] &= !(1 << (e % 64));
    }

    pub fn contains(&self, e: EdgeId) -> bool {
        e < self.len && self.words[e / 64] >> (e % 64) & 1 == 1
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = EdgeId> + '_ {
        (0..self.len).filter(move |&e| self.contains(e))
    }

    pub fn to_vec(&self) -> Vec<EdgeId> {
        self.iter().collect()
    }

    pub fn union(&self, other: &EdgeSet) -> EdgeSet {
        assert_eq!(self.len, other.len);
        EdgeSet {
            len: self.len,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a | b).collect(),
        }
    }

    pub fn intersection(&self, other: &EdgeSet) -> EdgeSet {
        assert_eq!(self.len, other.len);
        EdgeSet {
            len: self.len,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        }
    }

    pub fn difference(&self, other: &EdgeSet) -> EdgeSet {
        assert_eq!(self.len, other.len);
        EdgeSet {
            len: self.len,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & !b).collect(),
        }
    }

    pub fn is_disjoint(&self, other: &EdgeSet) -> bool {
        self.intersection(other).is_empty()
    }

    pub fn is_subset(&self, other: &EdgeSet) -> bool {
        self.difference(other).is_empty()
    }
}

/// Undirected multigraph. Parallel edges and self-loops are representable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiGraph {
    node_count: usize,
    edges: Vec<(NodeId, NodeId)>,
    weights: Option<Vec<u64>>,
    adj: Vec<Vec<(EdgeId, NodeId)>>,
}

impl MultiGraph {
    pub fn new(node_count: usize) -> Self {
        MultiGraph { node_count, edges: Vec::new(), weights: None, adj: vec![Vec::new(); node_count] }
    }

    pub fn from_edges(node_count: usize, edges: &[(NodeId, NodeId)]) -> Self {
        let mut g = Self::new(node_count);
        for &(u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    pub fn add_node(&mut self) -> NodeId {
        self.node_count += 1;
        self.adj.push(Vec::new());
        if let Some(w) = &mut self.weights {
            w.push(1);
        }
        self.node_count - 1
    }

    /// Add a node with weight `w`, making the graph weighted if it was not.
    pub fn add_weighted_node(&mut self, w: u64) -> NodeId {
        if self.weights.is_none() {
            self.weights = Some(vec![1; self.node_count]);
        }
        let v = self.add_node();
        self.weights.as_mut().unwrap()[v] = w;
        v
    }

    pub fn add_edge(&mut self, u: NodeId, v: NodeId) -> EdgeId {
        assert!(u < self.node_count && v < self.node_count, "endpoint out of range");
        let e = self.edges.len();
        self.edges.push((u, v));
        self.adj[u].push((e, v));
        if u != v {
            self.adj[v].push((e, u));
        }
        e
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(NodeId, NodeId)] {
        &self.edges
    }

    pub fn endpoints(&self, e: EdgeId) -> (NodeId, NodeId) {
        self.edges[e]
    }

    pub fn other_end(&self, e: EdgeId, v: NodeId) -> NodeId {
        let (a, b) = self.edges[e];
        if a == v {
            b
        } else {
            a
        }
    }

    pub fn is_loop(&self, e: EdgeId) -> bool {
        let (a, b) = self.edges[e];
        a == b
    }

    /// Incident `(edge, neighbor)` pairs; a self-loop is listed once.
    pub fn incident(&self, v: NodeId) -> &[(EdgeId, NodeId)] {
        &self.adj[v]
    }

    /// Degree counting a self-loop twice.
    pub fn degree(&self, v: NodeId) -> usize {
        self.adj[v].iter().map(|&(_, u)| if u == v { 2 } else { 1 }).sum()
    }

    pub fn has_self_loops(&self) -> bool {
        self.edges.iter().any(|&(a, b)| a == b)
    }

    pub fn is_simple(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        self.edges.iter().all(|&(a, b)| a != b && seen.insert((a.min(b), a.max(b))))
    }

    pub fn weights(&self) -> Option<&[u64]> {
        self.weights.as_deref()
    }

    pub fn set_weights(&mut self, w: Option<Vec<u64>>) {
        if let Some(w) = &w {
            assert_eq!(w.len(), self.node_count, "weight vector length");
        }
        self.weights = w;
    }

    /// Node weight, 1 when the graph is unweighted.
    pub fn weight(&self, v: NodeId) -> u64 {
        self.weights.as_ref().map_or(1, |w| w[v])
    }

    pub fn total_weight(&self) -> u64 {
        (0..self.node_count).map(|v| self.weight(v)).sum()
    }

    pub fn full_edge_set(&self) -> EdgeSet {
        EdgeSet::full(self.edge_count())
    }

    pub fn empty_edge_set(&self) -> EdgeSet {
        EdgeSet::new(self.edge_count())
    }

    /// Component label per node using only the edges in `mask`, plus the component count.
    pub fn components_with(&self, mask: &EdgeSet) -> (Vec<usize>, usize) {
        let mut label = vec![usize::MAX; self.node_count];
        let mut count = 0;
        let mut stack = Vec::new();
        for s in 0..self.node_count {
            if label[s] != usize::MAX {
                continue;
            }
            label[s] = count;
            stack.push(s);
            while let Some(v) = stack.pop() {
                for &(e, u) in &self.adj[v] {
                    if mask.contains(e) && label[u] == usize::MAX {
                        label[u] = count;
                        stack.push(u);
                    }
                }
            }
            count += 1;
        }
        (label, count)
    }

    pub fn components(&self) -> (Vec<usize>, usize) {
        self.components_with(&self.full_edge_set())
    }

    pub fn is_connected(&self) -> bool {
        self.components().1 <= 1
    }

    /// Whether the nodes with `member[v]` induce a connected subgraph (empty counts as connected).
    pub fn induces_connected(&self, member: &[bool]) -> bool {
        let Some(start) = member.iter().position(|&m| m) else {
            return true;
        };
        let total = member.iter().filter(|&&m| m).count();
        let mut seen = vec![false; self.node_count];
        seen[start] = true;
        let mut stack = vec![start];
        let mut reached = 1;
        while let Some(v) = stack.pop() {
            for &(_, u) in &self.adj[v] {
                if member[u] && !seen[u] {
                    seen[u] = true;
                    reached += 1;
                    stack.push(u);
                }
            }
        }
        reached == total
    }

    /// Nodes touched by at least one edge of `j`.
    pub fn edge_induced_nodes(&self, j: &EdgeSet) -> Vec<bool> {
        let mut touched = vec![false; self.node_count];
        for e in j.iter() {
            let (a, b) = self.edges[e];
            touched[a] = true;
            touched[b] = true;
        }
        touched
    }

    /// Edges of `j` that are bridges of the edge-induced subgraph G[j].
    pub fn bridges_in(&self, j: &EdgeSet) -> Vec<EdgeId> {
        let n = self.node_count;
        let mut disc = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut bridges = Vec::new();
        let mut time = 0;
        // frames: (node, parent edge, next adjacency index)
        let mut stack: Vec<(NodeId, Option<EdgeId>, usize)> = Vec::new();
        for s in 0..n {
            if disc[s] != usize::MAX {
                continue;
            }
            disc[s] = time;
            low[s] = time;
            time += 1;
            stack.push((s, None, 0));
            while let Some(&mut (v, pe, ref mut idx)) = stack.last_mut() {
                if *idx < self.adj[v].len() {
                    let (e, u) = self.adj[v][*idx];
                    *idx += 1;
                    if !j.contains(e) || Some(e) == pe || u == v {
                        continue;
                    }
                    if disc[u] == usize::MAX {
                        disc[u] = time;
                        low[u] = time;
                        time += 1;
                        stack.push((u, Some(e), 0));
                    } else {
                        low[v] = low[v].min(disc[u]);
                    }
                } else {
                    stack.pop();
                    if let Some(&(p, _, _)) = stack.last() {
                        low[p] = low[p].min(low[v]);
                        if low[v] > disc[p] {
                            bridges.push(pe.expect("child frame has a parent edge"));
                        }
                    }
                }
            }
        }
        bridges.sort_unstable();
        bridges
    }

    /// Delete the edges in `remove`; returns the new graph and old→new edge id map.
    pub fn delete_edges(&self, remove: &EdgeSet) -> (MultiGraph, Vec<Option<EdgeId>>) {
        let mut g = MultiGraph::new(self.node_count);
        g.weights = self.weights.clone();
        let mut map = vec![None; self.edge_count()];
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            if !remove.contains(e) {
                map[e] = Some(g.add_edge(u, v));
            }
        }
        (g, map)
    }

    /// Contract the edges in `contract`, deleting every resulting self-loop.
    /// Weights of merged nodes are summed. Returns (graph, node map, edge map).
    pub fn contract_edges(&self, contract: &EdgeSet) -> (MultiGraph, Vec<NodeId>, Vec<Option<EdgeId>>) {
        let (label, count) = self.components_with(contract);
        // renumber by smallest member so the result is canonical
        let mut rename = vec![usize::MAX; count];
        let mut next = 0;
        for v in 0..self.node_count {
            if rename[label[v]] == usize::MAX {
                rename[label[v]] = next;
                next += 1;
            }
        }
        let node_map: Vec<NodeId> = (0..self.node_count).map(|v| rename[label[v]]).collect();
        let mut g = MultiGraph::new(count);
        if self.weights.is_some() {
            let mut w = vec![0u64; count];
            for v in 0..self.node_count {
                w[node_map[v]] += self.weight(v);
            }
            g.weights = Some(w);
        }
        let mut emap = vec![None; self.edge_count()];
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            let (a, b) = (node_map[u], node_map[v]);
            if a != b {
                emap[e] = Some(g.add_edge(a, b));
            }
        }
        (g, node_map, emap)
    }

    /// Graphviz DOT rendering for debugging.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph G {\n");
        for v in 0..self.node_count {
            match &self.weights {
                Some(w) => s.push_str(&format!("  {v} [label=\"{v}:{}\"];\n", w[v])),
                None => s.push_str(&format!("  {v};\n")),
            }
        }
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            s.push_str(&format!("  {u} -- {v} [label=\"{e}\"];\n"));
        }
        s.push_str("}\n");
        s
    }

    pub(crate) fn check_node(&self, v: NodeId) -> Result<()> {
        if v < self.node_count {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!("node {v} out of range {}", self.node_count)))
        }
    }
}

/// Number of connected components.
pub fn h0(g: &MultiGraph) -> usize {
    g.components().1
}

/// Circuit rank |E| − |V| + h0.
pub fn h1(g: &MultiGraph) -> usize {
    g.edge_count() + h0(g) - g.node_count()
}

/// h0 of the edge-induced subgraph G[j].
pub fn h0_of(g: &MultiGraph, j: &EdgeSet) -> usize {
    let touched = g.edge_induced_nodes(j);
    let (label, _) = g.components_with(j);
    let mut roots: Vec<usize> = (0..g.node_count()).filter(|&v| touched[v]).map(|v| label[v]).collect();
    roots.sort_unstable();
    roots.dedup();
    roots.len()
}

/// h1 of the edge-induced subgraph G[j].
pub fn h1_of(g: &MultiGraph, j: &EdgeSet) -> usize {
    let nodes = g.edge_induced_nodes(j).iter().filter(|&&t| t).count();
    j.count() + h0_of(g, j) - nodes
}

/// True iff G[j] has no bridge, i.e. j is a union of simple cycles.
pub fn is_in_e2(g: &MultiGraph, j: &EdgeSet) -> bool {
    if (0..g.edge_count()).any(|e| j.contains(e) && g.is_loop(e)) {
        return false;
    }
    g.bridges_in(j).is_empty()
}

/// True iff j ∈ E2 and h1(G[j]) = k − 1.
pub fn is_dual_k_partition(g: &MultiGraph, j: &EdgeSet, k: usize) -> bool {
    k >= 1 && is_in_e2(g, j) && h1_of(g, j) == k - 1
}

/// True iff j is a dual k-partition with the maximum |V| + k − 2 edges.
pub fn maximal_dual_k(g: &MultiGraph, j: &EdgeSet, k: usize) -> bool {
    is_dual_k_partition(g, j, k) && j.count() + 2 == g.node_count() + k
}

/// Disjoint-set forest with path halving and union by size.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect(), size: vec![1; n] }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> MultiGraph {
        MultiGraph::from_edges(n, &(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>())
    }

    #[test]
    fn edge_set_basics() {
        let mut s = EdgeSet::new(70);
        s.insert(3);
        s.insert(65);
        assert_eq!(s.count(), 2);
        assert!(s.contains(65) && !s.contains(64));
        assert_eq!(s.to_vec(), vec![3, 65]);
        s.remove(3);
        assert_eq!(s.to_vec(), vec![65]);
        let t = EdgeSet::from_ids(70, [1, 65]);
        assert_eq!(s.union(&t).to_vec(), vec![1, 65]);
        assert_eq!(s.intersection(&t).to_vec(), vec![65]);
        assert!(s.is_subset(&t));
    }

    #[test]
    fn homology_small_cases() {
        let path = MultiGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]);
        assert_eq!((h0(&path), h1(&path)), (1, 0));
        let c4 = cycle(4);
        assert_eq!((h0(&c4), h1(&c4)), (1, 1));
        let two = MultiGraph::from_edges(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]);
        assert_eq!((h0(&two), h1(&two)), (2, 2));
    }

    #[test]
    fn e2_membership() {
        let c4 = cycle(4);
        assert!(is_in_e2(&c4, &c4.full_edge_set()));
        let path = MultiGraph::from_edges(3, &[(0, 1), (1, 2)]);
        assert!(!is_in_e2(&path, &EdgeSet::from_ids(2, [0])));
        let bowtie = MultiGraph::from_edges(5, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)]);
        assert!(is_in_e2(&bowtie, &bowtie.full_edge_set()));
        let bigon = MultiGraph::from_edges(2, &[(0, 1), (0, 1)]);
        assert!(is_in_e2(&bigon, &bigon.full_edge_set()));
        assert!(!is_in_e2(&bigon, &EdgeSet::from_ids(2, [0])));
    }

    #[test]
    fn maximal_dual_examples() {
        let c4 = cycle(4);
        assert!(maximal_dual_k(&c4, &c4.full_edge_set(), 2));
        let theta = MultiGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]);
        assert!(maximal_dual_k(&theta, &theta.full_edge_set(), 3));
        // triangle 0-1-2 inside the theta graph does not span
        assert!(!maximal_dual_k(&theta, &EdgeSet::from_ids(5, [0, 1, 4]), 2));
    }

    #[test]
    fn contraction_deletes_loops() {
        let k3 = cycle(3);
        let (g, nodes, emap) = k3.contract_edges(&EdgeSet::from_ids(3, [0]));
        assert_eq!(g.node_count(), 2);
        assert_eq!(g.edge_count(), 2);
        assert_eq!(nodes[0], nodes[1]);
        assert_eq!(emap[0], None);
    }

    #[test]
    fn bridges_with_parallel_edges() {
        let g = MultiGraph::from_edges(3, &[(0, 1), (0, 1), (1, 2)]);
        assert_eq!(g.bridges_in(&g.full_edge_set()), vec![2]);
    }
}
