//! Gadget constructions with their projection and restriction maps.
//!
//! Every construction returns a [`GadgetMap`] recording, for each base edge, the
//! derived edges that replace it, so projections never need to guess provenance.

mod rd;

pub use rd::{build_rd, build_td, sbl_count_rd, sc_count_rd, vertex_replace_rd, RdGadget};

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::graph::{h1_of, is_in_e2, EdgeId, EdgeSet, MultiGraph, NodeId};
use crate::partition::{is_connected_partition, Partition};
use crate::plane::PlaneGraph;

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum GadgetKind {
    Identity,
    Bigons { d: usize },
    DoubledStar { d: usize },
    Dipoles { r: usize, d: usize },
    VertexReplaceRd { d: usize },
    FaceRefineTd { d: usize },
    Marginal { d: usize },
    WeightedMarginal { d: usize },
}

#[derive(Clone, Debug)]
pub struct GadgetMap {
    pub kind: GadgetKind,
    pub base: MultiGraph,
    pub derived: MultiGraph,
    pub plane: Option<PlaneGraph>,
    /// Derived edges replacing each base edge (empty when the edge was deleted or contracted).
    pub per_base_edge: Vec<Vec<EdgeId>>,
    /// Derived edges owned by a base node (vertex replacement) or base face (face refinement).
    pub per_base_cell: Vec<Vec<EdgeId>>,
    /// Image of each base node. Injective except after contraction.
    pub original_nodes: Vec<NodeId>,
}

impl GadgetMap {
    fn identity(g: &MultiGraph) -> GadgetMap {
        GadgetMap {
            kind: GadgetKind::Identity,
            base: g.clone(),
            derived: g.clone(),
            plane: None,
            per_base_edge: (0..g.edge_count()).map(|e| vec![e]).collect(),
            per_base_cell: Vec::new(),
            original_nodes: (0..g.node_count()).collect(),
        }
    }

    /// Base edges whose replacement meets `c` (π for bigon and dipole chains,
    /// the original-edge restriction for vertex replacement).
    pub fn project(&self, c: &EdgeSet) -> EdgeSet {
        EdgeSet::from_ids(
            self.base.edge_count(),
            (0..self.base.edge_count()).filter(|&e| self.per_base_edge[e].iter().any(|&x| c.contains(x))),
        )
    }

    /// Restriction of a derived partition to the original nodes.
    pub fn restrict(&self, p: &Partition) -> Partition {
        Partition::from_assign(p.k(), self.original_nodes.iter().map(|&v| p.block_of(v)).collect())
    }

    /// Provenance of every derived edge: `Some(base edge)` or `None` for gadget-internal edges.
    pub fn edge_provenance(&self) -> Vec<Option<EdgeId>> {
        let mut out = vec![None; self.derived.edge_count()];
        for (e, ds) in self.per_base_edge.iter().enumerate() {
            for &x in ds {
                out[x] = Some(e);
            }
        }
        out
    }
}

fn reject_loops(g: &MultiGraph) -> Result<()> {
    if g.has_self_loops() {
        return Err(Error::InvalidInput("gadget construction on a graph with self-loops".into()));
    }
    Ok(())
}

/// Replace each edge by a series chain of `d` segments, each made of `r` parallel edges.
fn parallel_chains(g: &MultiGraph, r: usize, d: usize, selected: impl Fn(EdgeId) -> bool) -> (MultiGraph, Vec<Vec<EdgeId>>) {
    let mut h = MultiGraph::new(g.node_count());
    h.set_weights(g.weights().map(|w| w.to_vec()));
    let weighted = g.weights().is_some();
    let mut per = vec![Vec::new(); g.edge_count()];
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        if !selected(e) {
            per[e].push(h.add_edge(u, v));
            continue;
        }
        let mut prev = u;
        for i in 0..d {
            let next = if i + 1 < d && weighted { h.add_weighted_node(0) } else if i + 1 < d { h.add_node() } else { v };
            for _ in 0..r {
                per[e].push(h.add_edge(prev, next));
            }
            prev = next;
        }
    }
    (h, per)
}

/// B_d(G): each edge subdivided into `d` segments, each segment doubled. d = 0 is the identity.
pub fn chain_of_bigons(g: &MultiGraph, d: usize) -> Result<GadgetMap> {
    reject_loops(g)?;
    if d == 0 {
        return Ok(GadgetMap::identity(g));
    }
    let (h, per) = parallel_chains(g, 2, d, |_| true);
    Ok(GadgetMap {
        kind: GadgetKind::Bigons { d },
        base: g.clone(),
        derived: h,
        plane: None,
        per_base_edge: per,
        per_base_cell: Vec::new(),
        original_nodes: (0..g.node_count()).collect(),
    })
}

/// π_d for a chain of bigons.
pub fn pi_bigons(m: &GadgetMap, c: &EdgeSet) -> EdgeSet {
    m.project(c)
}

/// B_{r,d}(G): each edge subdivided into `d` segments, each replaced by `r` parallel edges.
pub fn chain_of_dipoles(g: &MultiGraph, r: usize, d: usize) -> Result<GadgetMap> {
    reject_loops(g)?;
    if r == 0 || d == 0 {
        return Err(Error::InvalidInput("chain of dipoles needs r ≥ 1 and d ≥ 1".into()));
    }
    let (h, per) = parallel_chains(g, r, d, |_| true);
    Ok(GadgetMap {
        kind: GadgetKind::Dipoles { r, d },
        base: g.clone(),
        derived: h,
        plane: None,
        per_base_edge: per,
        per_base_cell: Vec::new(),
        original_nodes: (0..g.node_count()).collect(),
    })
}

pub fn pi_dipoles(m: &GadgetMap, x: &EdgeSet) -> EdgeSet {
    m.project(x)
}

/// Canonical lift of a dual k-partition `y` through a dipole chain (first parallel
/// edge of every segment) together with the number r^{d|Y|} of lifts.
pub fn lift(m: &GadgetMap, y: &EdgeSet) -> Result<(EdgeSet, BigUint)> {
    let GadgetKind::Dipoles { r, d } = m.kind else {
        return Err(Error::InvalidInput("lift is defined for chains of dipoles".into()));
    };
    if !is_in_e2(&m.base, y) {
        return Err(Error::InvalidInput(format!(
            "edge set is not a dual k-partition (h1 = {})",
            h1_of(&m.base, y)
        )));
    }
    let mut out = m.derived.empty_edge_set();
    for e in y.iter() {
        for seg in 0..d {
            out.insert(m.per_base_edge[e][seg * r]);
        }
    }
    let count = num_traits::pow(BigUint::from(r), d * y.count());
    Ok((out, count))
}

/// D_d(G): each edge replaced by `d` parallel edges, each subdivided once.
pub fn doubled_star(g: &MultiGraph, d: usize) -> Result<GadgetMap> {
    reject_loops(g)?;
    if d == 0 {
        return Err(Error::InvalidInput("doubled star needs d ≥ 1".into()));
    }
    let (h, per) = star_replace(g, d, |_| true);
    Ok(GadgetMap {
        kind: GadgetKind::DoubledStar { d },
        base: g.clone(),
        derived: h,
        plane: None,
        per_base_edge: per,
        per_base_cell: Vec::new(),
        original_nodes: (0..g.node_count()).collect(),
    })
}

/// Replace selected edges by doubled d-stars whose new nodes get weight 0 when the
/// graph is weighted.
fn star_replace(g: &MultiGraph, d: usize, selected: impl Fn(EdgeId) -> bool) -> (MultiGraph, Vec<Vec<EdgeId>>) {
    let mut h = MultiGraph::new(g.node_count());
    let mut weights = g.weights().map(|w| w.to_vec());
    let mut per = vec![Vec::new(); g.edge_count()];
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        if !selected(e) {
            per[e].push(h.add_edge(u, v));
            continue;
        }
        for _ in 0..d {
            let s = h.add_node();
            if let Some(w) = &mut weights {
                w.push(0);
            }
            per[e].push(h.add_edge(u, s));
            per[e].push(h.add_edge(s, v));
        }
    }
    h.set_weights(weights);
    (h, per)
}

/// Restriction R_d((A, B)) = (A ∩ V(G), B ∩ V(G)) of a connected partition of D_d(G).
pub fn restrict_doubled_star(m: &GadgetMap, p: &Partition) -> Result<Partition> {
    if p.node_count() != m.derived.node_count() {
        return Err(Error::InvalidInput("partition size does not match the derived graph".into()));
    }
    if !is_connected_partition(&m.derived, p) {
        return Err(Error::DisconnectedPartition);
    }
    Ok(m.restrict(p))
}

/// G_{J,J′}(d): edges of `j2` deleted, edges of `j` replaced by chains of `d` bigons.
pub fn marginal_graph(g: &MultiGraph, j: &EdgeSet, j2: &EdgeSet, d: usize) -> Result<GadgetMap> {
    reject_loops(g)?;
    if !j.is_disjoint(j2) {
        return Err(Error::InvalidInput("J and J′ must be disjoint".into()));
    }
    if d == 0 && !j.is_empty() {
        return Err(Error::InvalidInput("marginal graph needs d ≥ 1".into()));
    }
    let (deleted, emap) = g.delete_edges(j2);
    let (h, per_kept) = parallel_chains(&deleted, 2, d, |e| {
        let orig = emap.iter().position(|&x| x == Some(e)).expect("kept edge has a preimage");
        j.contains(orig)
    });
    let per = (0..g.edge_count()).map(|e| emap[e].map_or(Vec::new(), |x| per_kept[x].clone())).collect();
    Ok(GadgetMap {
        kind: GadgetKind::Marginal { d },
        base: g.clone(),
        derived: h,
        plane: None,
        per_base_edge: per,
        per_base_cell: Vec::new(),
        original_nodes: (0..g.node_count()).collect(),
    })
}

/// W^{J,J′}(G, w)(d): edges of `j2` contracted (self-loops deleted), edges of `j`
/// replaced by doubled d-stars whose new nodes have weight 0.
pub fn w_marginal_graph(g: &MultiGraph, w: &[u64], j: &EdgeSet, j2: &EdgeSet, d: usize) -> Result<GadgetMap> {
    reject_loops(g)?;
    if !j.is_disjoint(j2) {
        return Err(Error::InvalidInput("J and J′ must be disjoint".into()));
    }
    if w.len() != g.node_count() {
        return Err(Error::InvalidInput("one weight per node required".into()));
    }
    let mut weighted = g.clone();
    weighted.set_weights(Some(w.to_vec()));
    let (contracted, node_map, emap) = weighted.contract_edges(j2);
    let mut pre = vec![None; contracted.edge_count()];
    for (e, x) in emap.iter().enumerate() {
        if let Some(x) = x {
            pre[*x] = Some(e);
        }
    }
    let (h, per_kept) = star_replace(&contracted, d, |x| pre[x].is_some_and(|e| j.contains(e)) && d > 0);
    let per = (0..g.edge_count()).map(|e| emap[e].map_or(Vec::new(), |x| per_kept[x].clone())).collect();
    Ok(GadgetMap {
        kind: GadgetKind::WeightedMarginal { d },
        base: g.clone(),
        derived: h,
        plane: None,
        per_base_edge: per,
        per_base_cell: Vec::new(),
        original_nodes: node_map,
    })
}
