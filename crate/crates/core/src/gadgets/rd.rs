//! The nested-triangle gadget R_d, vertex replacement on cubic plane graphs, and
//! the face refinement T_d of a triangulation.

use std::f64::consts::PI;

use num_bigint::BigUint;

use super::{GadgetKind, GadgetMap};
use crate::error::{Error, Result};
use crate::graph::{MultiGraph, NodeId};
use crate::plane::{Dart, PlaneGraph};

#[derive(Clone, Debug)]
pub struct RdGadget {
    pub d: usize,
    pub plane: PlaneGraph,
    pub coords: Vec<(f64, f64)>,
    pub terminals: [NodeId; 3],
    /// (a_i, b_i, c_i) for i = 0..=d.
    pub level_cycles: Vec<[NodeId; 3]>,
}

impl RdGadget {
    pub fn graph(&self) -> &MultiGraph {
        self.plane.graph()
    }

    /// The label rotation a → b → c → a as a node permutation.
    pub fn rotation_automorphism(&self) -> Vec<NodeId> {
        let n = self.graph().node_count();
        (0..n).map(|v| 3 * (v / 3) + (v % 3 + 1) % 3).collect()
    }
}

fn polar(r: f64, deg: f64) -> (f64, f64) {
    let t = deg * PI / 180.0;
    (r * t.cos(), r * t.sin())
}

/// R_d with nodes numbered level by level: a_i, b_i, c_i get 6i, 6i+1, 6i+2 and the
/// subdivision nodes c′_i, a′_i, b′_i get 6i+3, 6i+4, 6i+5.
pub fn build_rd(d: usize) -> Result<RdGadget> {
    let n = 3 + 6 * d;
    let mut g = MultiGraph::new(n);
    let mut coords = vec![(0.0, 0.0); n];
    let mut level_cycles = Vec::with_capacity(d + 1);
    let mut r = 1.0;
    for i in 0..=d {
        let (a, b, c) = (6 * i, 6 * i + 1, 6 * i + 2);
        let base = if i % 2 == 0 { 90.0 } else { 270.0 };
        coords[a] = polar(r, base);
        coords[b] = polar(r, base + 120.0);
        coords[c] = polar(r, base + 240.0);
        level_cycles.push([a, b, c]);
        if i == d {
            g.add_edge(a, b);
            g.add_edge(b, c);
            g.add_edge(c, a);
            break;
        }
        let (c1, a1, b1) = (6 * i + 3, 6 * i + 4, 6 * i + 5);
        let mid = |p: (f64, f64), q: (f64, f64)| ((p.0 + q.0) / 2.0, (p.1 + q.1) / 2.0);
        coords[c1] = mid(coords[a], coords[b]);
        coords[a1] = mid(coords[b], coords[c]);
        coords[b1] = mid(coords[c], coords[a]);
        for (x, y) in [(a, c1), (c1, b), (b, a1), (a1, c), (c, b1), (b1, a)] {
            g.add_edge(x, y);
        }
        g.add_edge(a1, 6 * i + 6);
        g.add_edge(b1, 6 * i + 7);
        g.add_edge(c1, 6 * i + 8);
        r /= 4.0;
    }
    let plane = PlaneGraph::from_coords(g, &coords)?;
    Ok(RdGadget { d, plane, coords, terminals: [0, 1, 2], level_cycles })
}

/// |SC(R_d)| = (3·5^{d+1} − 8d − 11) / 4.
pub fn sc_count_rd(d: usize) -> BigUint {
    let p = num_traits::pow(BigUint::from(5u32), d + 1);
    (p * 3u32 - BigUint::from(8 * d + 11)) / 4u32
}

/// |SBL(R_d)| = (5^{d+1} − 1) / 2.
pub fn sbl_count_rd(d: usize) -> BigUint {
    (num_traits::pow(BigUint::from(5u32), d + 1) - 1u32) / 2u32
}

/// R_d(G): every node of a cubic plane graph replaced by a copy of R_d whose
/// terminals a_0, b_0, c_0 take the three incident darts in rotation order.
/// Original edges keep their ids; copy `v` owns the edges listed in `per_base_cell[v]`.
pub fn vertex_replace_rd(g: &PlaneGraph, d: usize) -> Result<GadgetMap> {
    let base = g.graph();
    if base.has_self_loops() {
        return Err(Error::InvalidInput("vertex replacement on a graph with self-loops".into()));
    }
    if let Some(v) = (0..base.node_count()).find(|&v| base.degree(v) != 3) {
        return Err(Error::NotCubic(v));
    }
    let rd = build_rd(d)?;
    let gadget = rd.graph();
    let (gn, gm) = (gadget.node_count(), gadget.edge_count());
    let m = base.edge_count();
    let mut h = MultiGraph::new(base.node_count() * gn);
    // terminal index of each dart at its tail
    let mut slot = vec![0usize; 2 * m];
    for v in 0..base.node_count() {
        for (i, &dart) in g.rotation()[v].iter().enumerate() {
            slot[dart] = i;
        }
    }
    for e in 0..m {
        let (u, w) = base.endpoints(e);
        h.add_edge(u * gn + slot[2 * e], w * gn + slot[2 * e + 1]);
    }
    let mut per_cell = Vec::with_capacity(base.node_count());
    for v in 0..base.node_count() {
        let mut own = Vec::with_capacity(gm);
        for &(x, y) in gadget.edges() {
            own.push(h.add_edge(v * gn + x, v * gn + y));
        }
        per_cell.push(own);
    }
    let mut rotation = vec![Vec::new(); h.node_count()];
    for v in 0..base.node_count() {
        let shift = 2 * (m + v * gm);
        for x in 0..gn {
            let (px, py) = rd.coords[x];
            let mut items: Vec<(f64, Dart)> = gadget
                .incident(x)
                .iter()
                .map(|&(e, y)| {
                    let dart = if gadget.endpoints(e).0 == x { 2 * e } else { 2 * e + 1 };
                    let (qx, qy) = rd.coords[y];
                    ((qy - py).atan2(qx - px), shift + dart)
                })
                .collect();
            if x < 3 {
                items.push((py.atan2(px), g.rotation()[v][x]));
            }
            items.sort_by(|a, b| a.0.total_cmp(&b.0));
            rotation[v * gn + x] = items.into_iter().map(|(_, dart)| dart).collect();
        }
    }
    let plane = PlaneGraph::new(h.clone(), rotation, g.outer_dart())?;
    Ok(GadgetMap {
        kind: GadgetKind::VertexReplaceRd { d },
        base: base.clone(),
        derived: h,
        plane: Some(plane),
        per_base_edge: (0..m).map(|e| vec![e]).collect(),
        per_base_cell: per_cell,
        original_nodes: (0..base.node_count()).map(|v| v * gn).collect(),
    })
}

/// T_d = (R_d(G*))* for a plane triangulation G. Base edge `e` survives as derived
/// edge `e` between the images of its endpoints; face `f` of G owns the refinement
/// edges in `per_base_cell[f]`.
pub fn build_td(g: &PlaneGraph, d: usize) -> Result<GadgetMap> {
    let base = g.graph();
    if !base.is_simple() || !base.is_connected() {
        return Err(Error::NotTriangulation(0));
    }
    if let Some(f) = (0..g.face_count()).find(|&f| g.face_degree(f) != 3) {
        return Err(Error::NotTriangulation(f));
    }
    let (star, _) = g.dual()?;
    let r = vertex_replace_rd(&star, d)?;
    let rp = r.plane.as_ref().expect("vertex replacement is embedded");
    let (t, _) = rp.dual()?;
    // each original dart of R_d(G*) lies on the face around one endpoint of its edge
    let original = [0usize, 1]
        .into_iter()
        .find_map(|flip| node_images(g, rp, flip))
        .ok_or_else(|| Error::InvalidEmbedding("nodes of G do not map to faces of R_d(G*)".into()))?;
    for e in 0..base.edge_count() {
        let (u, w) = base.endpoints(e);
        let (x, y) = t.graph().endpoints(e);
        if !((x, y) == (original[u], original[w]) || (x, y) == (original[w], original[u])) {
            return Err(Error::InvalidEmbedding(format!("edge {e} does not join the images of its endpoints")));
        }
    }
    Ok(GadgetMap {
        kind: GadgetKind::FaceRefineTd { d },
        base: base.clone(),
        derived: t.graph().clone(),
        plane: Some(t),
        per_base_edge: (0..base.edge_count()).map(|e| vec![e]).collect(),
        per_base_cell: r.per_base_cell,
        original_nodes: original,
    })
}

fn node_images(g: &PlaneGraph, rp: &PlaneGraph, flip: usize) -> Option<Vec<NodeId>> {
    let mut original = vec![usize::MAX; g.graph().node_count()];
    for h in 0..2 * g.graph().edge_count() {
        let v = g.tail(h);
        let f = rp.face_of(h ^ flip);
        if original[v] == usize::MAX {
            original[v] = f;
        } else if original[v] != f {
            return None;
        }
    }
    Some(original)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::cycles::{count_simple_paths, enum_simple_cycles};

    #[test]
    fn sizes() {
        for d in 0..5 {
            let r = build_rd(d).unwrap();
            assert_eq!(r.graph().node_count(), 3 + 6 * d);
            assert_eq!(r.graph().edge_count(), 3 + 9 * d);
            assert!(r.plane.euler_holds());
        }
    }

    #[test]
    fn closed_forms() {
        let sc: Vec<u32> = (0..4).map(|d| sc_count_rd(d).try_into().unwrap()).collect();
        assert_eq!(sc, vec![1, 14, 87, 460]);
        let sbl: Vec<u32> = (0..4).map(|d| sbl_count_rd(d).try_into().unwrap()).collect();
        assert_eq!(sbl, vec![2, 12, 62, 312]);
    }

    #[test]
    fn automorphism_preserves_edges() {
        let r = build_rd(3).unwrap();
        let sigma = r.rotation_automorphism();
        let norm = |(x, y): (usize, usize)| (x.min(y), x.max(y));
        let mut edges: Vec<_> = r.graph().edges().iter().map(|&e| norm(e)).collect();
        let mut mapped: Vec<_> = r.graph().edges().iter().map(|&(x, y)| norm((sigma[x], sigma[y]))).collect();
        edges.sort();
        mapped.sort();
        assert_eq!(edges, mapped);
    }

    #[test]
    fn brute_force_small_levels() {
        for d in 0..3 {
            let r = build_rd(d).unwrap();
            let cycles = enum_simple_cycles(r.graph(), 30).unwrap();
            assert_eq!(BigUint::from(cycles.len()), sc_count_rd(d));
            assert_eq!(BigUint::from(count_simple_paths(r.graph(), 0, 1, None)), sbl_count_rd(d));
        }
    }

    fn k4_plane() -> PlaneGraph {
        let g = MultiGraph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        PlaneGraph::from_coords(g, &[(0.0, 0.0), (0.0, 10.0), (-9.0, -5.0), (9.0, -5.0)]).unwrap()
    }

    #[test]
    fn vertex_replacement_on_k4() {
        let m = vertex_replace_rd(&k4_plane(), 1).unwrap();
        assert_eq!(m.derived.node_count(), 4 * 9);
        assert_eq!(m.derived.edge_count(), 6 + 4 * 12);
        assert!((0..m.derived.node_count()).all(|v| m.derived.degree(v) == 3));
        let pg = m.plane.as_ref().unwrap();
        assert!(pg.euler_holds());
        let c = m.derived.full_edge_set();
        assert_eq!(m.project(&c), m.base.full_edge_set());
    }

    #[test]
    fn face_refinement_of_k4() {
        let t = build_td(&k4_plane(), 1).unwrap();
        assert_eq!(t.derived.node_count(), 20);
        assert_eq!(t.derived.edge_count(), 54);
        assert!((0..20).all(|v| t.derived.degree(v) <= 9));
        let pg = t.plane.as_ref().unwrap();
        assert!((0..pg.face_count()).all(|f| pg.face_degree(f) == 3));
        let mut seen = t.original_nodes.clone();
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), 4);
        let t0 = build_td(&k4_plane(), 0).unwrap();
        assert_eq!((t0.derived.node_count(), t0.derived.edge_count()), (8, 18));
    }

    #[test]
    fn rejects_non_cubic() {
        let c4 = MultiGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        let pg = PlaneGraph::from_coords(c4, &[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]).unwrap();
        assert!(matches!(vertex_replace_rd(&pg, 1), Err(Error::NotCubic(_))));
        assert!(matches!(build_td(&pg, 1), Err(Error::NotTriangulation(_))));
    }
}
