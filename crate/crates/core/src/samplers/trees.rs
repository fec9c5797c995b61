//! Random spanning trees and the balanced tree-cut partition generator.

use num_rational::BigRational;
use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, EdgeSet, MultiGraph, NodeId, UnionFind};
use crate::partition::{comp, ratio_balanced, Partition};

/// Uniform spanning tree by loop-erased random walks (Wilson), rooted at node 0.
pub fn wilson_ust<R: Rng + ?Sized>(g: &MultiGraph, rng: &mut R) -> Result<EdgeSet> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let n = g.node_count();
    let mut tree = g.empty_edge_set();
    if n == 0 {
        return Ok(tree);
    }
    let steps: Vec<Vec<(EdgeId, NodeId)>> =
        (0..n).map(|v| g.incident(v).iter().copied().filter(|&(_, u)| u != v).collect()).collect();
    let mut in_tree = vec![false; n];
    let mut next: Vec<(EdgeId, NodeId)> = vec![(usize::MAX, usize::MAX); n];
    in_tree[0] = true;
    for start in 1..n {
        let mut u = start;
        while !in_tree[u] {
            let opts = &steps[u];
            next[u] = opts[rng.gen_range(0..opts.len())];
            u = next[u].1;
        }
        let mut u = start;
        while !in_tree[u] {
            in_tree[u] = true;
            tree.insert(next[u].0);
            u = next[u].1;
        }
    }
    Ok(tree)
}

/// Minimum spanning tree under fresh iid Uniform[0, 1) edge weights, ties broken by edge id.
pub fn random_mst<R: Rng + ?Sized>(g: &MultiGraph, rng: &mut R) -> Result<EdgeSet> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let weights: Vec<f64> = (0..g.edge_count()).map(|_| rng.gen::<f64>()).collect();
    let mut order: Vec<EdgeId> = (0..g.edge_count()).collect();
    order.sort_by(|&a, &b| weights[a].total_cmp(&weights[b]).then(a.cmp(&b)));
    let mut uf = UnionFind::new(g.node_count());
    let mut tree = g.empty_edge_set();
    for e in order {
        let (u, v) = g.endpoints(e);
        if uf.union(u, v) {
            tree.insert(e);
        }
    }
    Ok(tree)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TreeKind {
    Ust,
    Mst,
}

/// How a cut edge is chosen from a drawn tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CutRule {
    /// Uniform over the tree edges whose removal is ε-balanced; redraw when there are none.
    UniformValid,
    /// One uniform tree edge; redraw the tree when it is not ε-balanced.
    PickThenReject,
}

#[derive(Clone, Debug)]
pub struct TreePartitionOptions {
    pub eps: BigRational,
    pub tree: TreeKind,
    pub rule: CutRule,
    pub max_retries: usize,
}

impl TreePartitionOptions {
    pub fn new(eps: BigRational, tree: TreeKind) -> Self {
        TreePartitionOptions { eps, tree, rule: CutRule::UniformValid, max_retries: 1000 }
    }
}

/// For each tree edge, the weight on the side away from node 0.
fn subtree_weights(g: &MultiGraph, tree: &EdgeSet, w: &[u64]) -> Vec<(EdgeId, u64)> {
    let n = g.node_count();
    let mut order = Vec::with_capacity(n);
    let mut parent: Vec<Option<(EdgeId, NodeId)>> = vec![None; n];
    let mut seen = vec![false; n];
    seen[0] = true;
    order.push(0);
    let mut head = 0;
    while head < order.len() {
        let v = order[head];
        head += 1;
        for &(e, u) in g.incident(v) {
            if tree.contains(e) && !seen[u] {
                seen[u] = true;
                parent[u] = Some((e, v));
                order.push(u);
            }
        }
    }
    let mut sub: Vec<u64> = w.to_vec();
    let mut out = Vec::with_capacity(n.saturating_sub(1));
    for &v in order.iter().rev() {
        if let Some((e, p)) = parent[v] {
            sub[p] += sub[v];
            out.push((e, sub[v]));
        }
    }
    out.sort_unstable();
    out
}

/// Draw a spanning tree and cut one ε-balanced tree edge, returning the two components.
pub fn tree_partition<R: Rng + ?Sized>(
    g: &MultiGraph,
    w: Option<&[u64]>,
    opts: &TreePartitionOptions,
    rng: &mut R,
) -> Result<Partition> {
    if opts.eps < BigRational::from_integer(0.into()) {
        return Err(Error::InvalidInput("eps must be nonnegative".into()));
    }
    let weights: Vec<u64> = match w.or(g.weights()) {
        Some(w) if w.len() == g.node_count() => w.to_vec(),
        Some(_) => return Err(Error::InvalidInput("one weight per node required".into())),
        None => vec![1; g.node_count()],
    };
    if g.node_count() < 2 {
        return Err(Error::InvalidInput("need at least two nodes".into()));
    }
    let total: u64 = weights.iter().sum();
    for _ in 0..opts.max_retries.max(1) {
        let tree = match opts.tree {
            TreeKind::Ust => wilson_ust(g, rng)?,
            TreeKind::Mst => random_mst(g, rng)?,
        };
        let sides = subtree_weights(g, &tree, &weights);
        let valid = |&(_, a): &(EdgeId, u64)| ratio_balanced(a, total - a, &opts.eps);
        let chosen = match opts.rule {
            CutRule::UniformValid => {
                let ok: Vec<EdgeId> = sides.iter().filter(|s| valid(s)).map(|&(e, _)| e).collect();
                (!ok.is_empty()).then(|| ok[rng.gen_range(0..ok.len())])
            }
            CutRule::PickThenReject => {
                let s = sides[rng.gen_range(0..sides.len())];
                valid(&s).then_some(s.0)
            }
        };
        if let Some(e) = chosen {
            let mut removed = g.full_edge_set().difference(&tree);
            removed.insert(e);
            return Ok(comp(g, &removed));
        }
    }
    Err(Error::RetriesExhausted(opts.max_retries.max(1)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::{is_connected_partition, is_eps_balanced, rat};
    use crate::samplers::seeded_rng;

    #[test]
    fn trees_of_a_tree() {
        let t = MultiGraph::from_edges(4, &[(0, 1), (1, 2), (1, 3)]);
        let mut rng = seeded_rng(7);
        assert_eq!(wilson_ust(&t, &mut rng).unwrap(), t.full_edge_set());
        assert_eq!(random_mst(&t, &mut rng).unwrap(), t.full_edge_set());
        let disc = MultiGraph::from_edges(3, &[(0, 1)]);
        assert!(matches!(wilson_ust(&disc, &mut rng), Err(Error::Disconnected)));
    }

    #[test]
    fn spanning_trees_have_n_minus_one_edges() {
        let g = MultiGraph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 2), (1, 1), (3, 4)]);
        let mut rng = seeded_rng(8);
        for _ in 0..100 {
            for t in [wilson_ust(&g, &mut rng).unwrap(), random_mst(&g, &mut rng).unwrap()] {
                assert_eq!(t.count(), 4);
                assert_eq!(crate::graph::h0_of(&g, &t), 1);
            }
        }
    }

    #[test]
    fn even_path_middle_split() {
        let p = MultiGraph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)]);
        let mut rng = seeded_rng(9);
        for kind in [TreeKind::Ust, TreeKind::Mst] {
            for rule in [CutRule::UniformValid, CutRule::PickThenReject] {
                let opts = TreePartitionOptions { rule, ..TreePartitionOptions::new(rat(0, 1), kind) };
                let part = tree_partition(&p, None, &opts, &mut rng).unwrap();
                assert_eq!(part.assign(), &[0, 0, 0, 1, 1, 1]);
            }
        }
    }

    #[test]
    fn outputs_are_balanced() {
        let c8 = MultiGraph::from_edges(8, &(0..8).map(|i| (i, (i + 1) % 8)).collect::<Vec<_>>());
        let mut rng = seeded_rng(10);
        let opts = TreePartitionOptions::new(rat(1, 3), TreeKind::Ust);
        for _ in 0..200 {
            let p = tree_partition(&c8, None, &opts, &mut rng).unwrap();
            assert!(is_connected_partition(&c8, &p));
            assert!(is_eps_balanced(&p, &rat(1, 3), None).unwrap());
        }
        let star = MultiGraph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]);
        let strict = TreePartitionOptions { max_retries: 5, ..TreePartitionOptions::new(rat(0, 1), TreeKind::Mst) };
        assert!(matches!(tree_partition(&star, None, &strict, &mut rng), Err(Error::RetriesExhausted(5))));
    }
}
