//! Generating functions of simple cycles and paths on SP-trees, and their
//! extension to graphs of treewidth at most two through zero-weight completion edges.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Signed};

use super::poly::{Semiring, UniPoly};
use super::sptree::{recognize_sp_on, SPTree, SpKind};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, EdgeSet, MultiGraph, NodeId};

/// (f_SC, f_SP) of the tree's graph, with leaf edge `e` weighted by `w(e)`.
pub fn eval_fsc_fsp<S: Semiring>(tree: &SPTree, w: impl Fn(EdgeId) -> S) -> (S, S) {
    let mut vals: Vec<(S, S)> = Vec::with_capacity(tree.nodes.len());
    for node in &tree.nodes {
        let v = match node.kind {
            SpKind::Leaf(e) => (S::additive_zero(), w(e)),
            SpKind::Series(a, b, _) => {
                let ((sc1, sp1), (sc2, sp2)) = (&vals[a], &vals[b]);
                (sc1.add(sc2), sp1.mul(sp2))
            }
            SpKind::Parallel(a, b) => {
                let ((sc1, sp1), (sc2, sp2)) = (&vals[a], &vals[b]);
                (sc1.add(sc2).add(&sp1.mul(sp2)), sp1.add(sp2))
            }
        };
        vals.push(v);
    }
    vals.pop().expect("nonempty tree")
}

/// Blocks (maximal 2-connected subgraphs and bridges) as edge lists. Self-loops are skipped.
pub fn biconnected_blocks(g: &MultiGraph) -> Vec<Vec<EdgeId>> {
    let n = g.node_count();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut time = 0;
    let mut blocks = Vec::new();
    let mut estack: Vec<EdgeId> = Vec::new();
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        disc[root] = time;
        low[root] = time;
        time += 1;
        // (node, edge to parent, next incidence index)
        let mut stack: Vec<(NodeId, Option<EdgeId>, usize)> = vec![(root, None, 0)];
        while let Some(top) = stack.len().checked_sub(1) {
            let (v, pe, i) = stack[top];
            if let Some(&(e, u)) = g.incident(v).get(i) {
                stack[top].2 += 1;
                if u == v || Some(e) == pe {
                    continue;
                }
                if disc[u] == usize::MAX {
                    disc[u] = time;
                    low[u] = time;
                    time += 1;
                    estack.push(e);
                    stack.push((u, Some(e), 0));
                } else if disc[u] < disc[v] {
                    estack.push(e);
                    low[v] = low[v].min(disc[u]);
                }
                continue;
            }
            stack.pop();
            if let (Some(pe), Some(&(p, _, _))) = (pe, stack.last()) {
                low[p] = low[p].min(low[v]);
                if low[v] >= disc[p] {
                    let mut block = Vec::new();
                    while let Some(e) = estack.pop() {
                        block.push(e);
                        if e == pe {
                            break;
                        }
                    }
                    block.sort_unstable();
                    blocks.push(block);
                }
            }
        }
    }
    blocks
}

/// A series-parallel supergraph of a treewidth-2 graph. Edges `0..original_edges`
/// are the input edges; later edges are completion edges that carry weight zero.
#[derive(Clone, Debug)]
pub struct Tw2Embedding {
    pub supergraph: MultiGraph,
    pub original_edges: usize,
    /// One SP-tree per connected component that has edges.
    pub trees: Vec<SPTree>,
}

impl Tw2Embedding {
    pub fn completion_edges(&self) -> std::ops::Range<EdgeId> {
        self.original_edges..self.supergraph.edge_count()
    }
}

/// Embed `g` into an SP supergraph per component by hanging every child block of the
/// block-cut tree off an edge of its parent block. Fails when treewidth exceeds two.
pub fn tw2_embedding(g: &MultiGraph) -> Result<Tw2Embedding> {
    let mut sup = g.clone();
    sup.set_weights(None);
    let blocks = biconnected_blocks(g);
    let mut node_blocks: Vec<Vec<usize>> = vec![Vec::new(); g.node_count()];
    let mut block_nodes: Vec<Vec<NodeId>> = Vec::with_capacity(blocks.len());
    for (b, edges) in blocks.iter().enumerate() {
        let mut nodes: Vec<NodeId> = edges.iter().flat_map(|&e| [g.endpoints(e).0, g.endpoints(e).1]).collect();
        nodes.sort_unstable();
        nodes.dedup();
        for &v in &nodes {
            node_blocks[v].push(b);
        }
        block_nodes.push(nodes);
    }
    let neighbor_in = |b: usize, c: NodeId| -> NodeId {
        blocks[b].iter().find_map(|&e| {
            let (x, y) = g.endpoints(e);
            (x == c).then_some(y).or((y == c).then_some(x))
        })
        .expect("block contains an edge at its node")
    };
    let mut seen = vec![false; blocks.len()];
    let mut trees = Vec::new();
    for root in 0..blocks.len() {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut comp_edges = blocks[root].clone();
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(b) = queue.pop_front() {
            for &c in &block_nodes[b] {
                for &h in &node_blocks[c] {
                    if seen[h] {
                        continue;
                    }
                    seen[h] = true;
                    let e = sup.add_edge(neighbor_in(h, c), neighbor_in(b, c));
                    comp_edges.push(e);
                    comp_edges.extend_from_slice(&blocks[h]);
                    queue.push_back(h);
                }
            }
        }
        let (s, t) = g.endpoints(blocks[root][0]);
        let tree = recognize_sp_on(&sup, &comp_edges, s, t).map_err(|e| match e {
            Error::NotSeriesParallel(..) => Error::TreewidthExceeded,
            other => other,
        })?;
        trees.push(tree);
    }
    Ok(Tw2Embedding { supergraph: sup, original_edges: g.edge_count(), trees })
}

/// f_SC(g, w) for a graph of treewidth at most two, with edge weights `w`.
pub fn fsc_tw2<S: Semiring>(g: &MultiGraph, w: impl Fn(EdgeId) -> S) -> Result<S> {
    if g.has_self_loops() {
        return Err(Error::InvalidInput("cycle generating function on a graph with self-loops".into()));
    }
    let emb = tw2_embedding(g)?;
    let m = emb.original_edges;
    let weight = |e: EdgeId| if e < m { w(e) } else { S::additive_zero() };
    Ok(emb.trees.iter().fold(S::additive_zero(), |acc, t| acc.add(&eval_fsc_fsp(t, weight).0)))
}

/// |SC(g)| for a graph of treewidth at most two.
pub fn count_sc(g: &MultiGraph) -> Result<BigUint> {
    fsc_tw2(g, |_| BigUint::one())
}

/// Σ Π_{e ∈ C} c(e) over simple cycles C with J ⊆ C and C ∩ J′ = ∅, read off as the
/// coefficient of x^{|J|} after marking the edges of J with x.
pub fn sc_marginal_mass(g: &MultiGraph, c: &[BigRational], j: &EdgeSet, j2: &EdgeSet) -> Result<BigRational> {
    if c.len() != g.edge_count() {
        return Err(Error::InvalidInput("one weight per edge required".into()));
    }
    if c.iter().any(|x| x.is_negative()) {
        return Err(Error::InvalidInput("edge weights must be nonnegative".into()));
    }
    if !j.is_disjoint(j2) {
        return Err(Error::InvalidInput("J and J′ must be disjoint".into()));
    }
    let f = fsc_tw2(g, |e| {
        if j2.contains(e) {
            UniPoly::additive_zero()
        } else if j.contains(e) {
            UniPoly::monomial(c[e].clone(), 1)
        } else {
            UniPoly::constant(c[e].clone())
        }
    })?;
    Ok(f.coeff(j.count()))
}

/// (|SC|, |SP(σ, τ)|) of a two-terminal SP graph, counted directly on its tree.
pub fn count_sc_sp(tree: &SPTree) -> (BigUint, BigUint) {
    eval_fsc_fsp(tree, |_| BigUint::one())
}
