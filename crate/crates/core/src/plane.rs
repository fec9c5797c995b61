//! Combinatorial plane embeddings as rotation systems over darts.
//!
//! Dart `2e` runs from the first endpoint of edge `e` to the second, dart `2e + 1`
//! runs back. `rotation[v]` lists the darts leaving `v` in counter-clockwise order,
//! and faces are the orbits of `h ↦ succ(rev(h))`.

use crate::error::{Error, Result};
use crate::graph::{EdgeId, EdgeSet, MultiGraph, NodeId};

pub type Dart = usize;

pub fn dart_edge(h: Dart) -> EdgeId {
    h / 2
}

pub fn rev(h: Dart) -> Dart {
    h ^ 1
}

#[derive(Clone, Debug)]
pub struct PlaneGraph {
    graph: MultiGraph,
    rotation: Vec<Vec<Dart>>,
    pos: Vec<usize>,
    faces: Vec<Vec<Dart>>,
    face_of: Vec<usize>,
    outer_dart: Option<Dart>,
}

impl PlaneGraph {
    /// Builds an embedding from per-node cyclic dart orders. The outer face is the
    /// face containing `outer_dart` (the first face when `None`).
    pub fn new(graph: MultiGraph, rotation: Vec<Vec<Dart>>, outer_dart: Option<Dart>) -> Result<Self> {
        let n = graph.node_count();
        let m = graph.edge_count();
        if rotation.len() != n {
            return Err(Error::InvalidEmbedding(format!("{} rotations for {n} nodes", rotation.len())));
        }
        let mut pos = vec![usize::MAX; 2 * m];
        for (v, rot) in rotation.iter().enumerate() {
            for (i, &h) in rot.iter().enumerate() {
                if h >= 2 * m || pos[h] != usize::MAX {
                    return Err(Error::InvalidEmbedding(format!("dart {h} invalid or repeated at node {v}")));
                }
                if tail_of(&graph, h) != v {
                    return Err(Error::InvalidEmbedding(format!("dart {h} does not leave node {v}")));
                }
                pos[h] = i;
            }
        }
        if let Some(h) = pos.iter().position(|&p| p == usize::MAX) {
            return Err(Error::InvalidEmbedding(format!("dart {h} missing from rotation")));
        }
        let mut pg = PlaneGraph { graph, rotation, pos, faces: Vec::new(), face_of: vec![usize::MAX; 2 * m], outer_dart: None };
        pg.trace_faces();
        if let Some(h) = outer_dart {
            if h >= 2 * m {
                return Err(Error::InvalidEmbedding(format!("outer dart {h} out of range")));
            }
        }
        pg.outer_dart = outer_dart.or(if m > 0 { Some(pg.faces[0][0]) } else { None });
        if !pg.euler_holds() {
            return Err(Error::InvalidEmbedding(format!(
                "rotation system is not planar: V={} E={} F={}",
                n,
                m,
                pg.faces.len()
            )));
        }
        Ok(pg)
    }

    /// Straight-line embedding: darts sorted counter-clockwise by angle. The outer
    /// face is the one with the largest absolute signed area.
    pub fn from_coords(graph: MultiGraph, coords: &[(f64, f64)]) -> Result<Self> {
        if coords.len() != graph.node_count() {
            return Err(Error::InvalidInput("one coordinate per node required".into()));
        }
        if graph.has_self_loops() {
            return Err(Error::InvalidEmbedding("self-loops have no straight-line drawing".into()));
        }
        let mut rotation = vec![Vec::new(); graph.node_count()];
        for v in 0..graph.node_count() {
            let mut darts: Vec<(f64, Dart)> = graph
                .incident(v)
                .iter()
                .map(|&(e, u)| {
                    let h = if graph.endpoints(e).0 == v { 2 * e } else { 2 * e + 1 };
                    let ang = (coords[u].1 - coords[v].1).atan2(coords[u].0 - coords[v].0);
                    (ang, h)
                })
                .collect();
            darts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            rotation[v] = darts.into_iter().map(|(_, h)| h).collect();
        }
        let mut pg = PlaneGraph::new(graph, rotation, None)?;
        if !pg.faces.is_empty() {
            let area = |f: &Vec<Dart>| -> f64 {
                f.iter()
                    .map(|&h| {
                        let (a, b) = (pg.tail(h), pg.head(h));
                        coords[a].0 * coords[b].1 - coords[b].0 * coords[a].1
                    })
                    .sum::<f64>()
            };
            let outer = (0..pg.faces.len())
                .max_by(|&x, &y| area(&pg.faces[x]).abs().total_cmp(&area(&pg.faces[y]).abs()).then(y.cmp(&x)))
                .unwrap();
            pg.outer_dart = Some(pg.faces[outer][0]);
        }
        Ok(pg)
    }

    fn trace_faces(&mut self) {
        let m2 = 2 * self.graph.edge_count();
        self.faces.clear();
        for start in 0..m2 {
            if self.face_of[start] != usize::MAX {
                continue;
            }
            let f = self.faces.len();
            let mut face = Vec::new();
            let mut h = start;
            loop {
                self.face_of[h] = f;
                face.push(h);
                h = self.next_in_face(h);
                if h == start {
                    break;
                }
            }
            self.faces.push(face);
        }
    }

    pub fn graph(&self) -> &MultiGraph {
        &self.graph
    }

    pub fn rotation(&self) -> &[Vec<Dart>] {
        &self.rotation
    }

    pub fn tail(&self, h: Dart) -> NodeId {
        tail_of(&self.graph, h)
    }

    pub fn head(&self, h: Dart) -> NodeId {
        tail_of(&self.graph, rev(h))
    }

    /// Next dart counter-clockwise around the tail of `h`.
    pub fn succ(&self, h: Dart) -> Dart {
        let rot = &self.rotation[self.tail(h)];
        rot[(self.pos[h] + 1) % rot.len()]
    }

    /// Following dart along the face of `h`.
    pub fn next_in_face(&self, h: Dart) -> Dart {
        self.succ(rev(h))
    }

    pub fn faces(&self) -> &[Vec<Dart>] {
        &self.faces
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn face_of(&self, h: Dart) -> usize {
        self.face_of[h]
    }

    pub fn face_degree(&self, f: usize) -> usize {
        self.faces[f].len()
    }

    pub fn face_edges(&self, f: usize) -> EdgeSet {
        EdgeSet::from_ids(self.graph.edge_count(), self.faces[f].iter().map(|&h| dart_edge(h)))
    }

    /// Distinct nodes on the boundary of face `f`, in traversal order.
    pub fn face_nodes(&self, f: usize) -> Vec<NodeId> {
        let mut out = Vec::new();
        for &h in &self.faces[f] {
            let v = self.tail(h);
            if !out.contains(&v) {
                out.push(v);
            }
        }
        out
    }

    pub fn outer_dart(&self) -> Option<Dart> {
        self.outer_dart
    }

    pub fn outer_face(&self) -> Option<usize> {
        self.outer_dart.map(|h| self.face_of[h])
    }

    pub fn set_outer_dart(&mut self, h: Dart) {
        assert!(h < 2 * self.graph.edge_count());
        self.outer_dart = Some(h);
    }

    /// Faces of the whole plane: traced faces, one per isolated node, outer faces merged.
    pub fn plane_face_count(&self) -> usize {
        let isolated = (0..self.graph.node_count()).filter(|&v| self.rotation[v].is_empty()).count();
        let h0 = self.graph.components().1;
        self.faces.len() + isolated + 1 - h0.max(1)
    }

    /// 1 + h0 = V − E + F.
    pub fn euler_holds(&self) -> bool {
        let h0 = self.graph.components().1 as i64;
        let v = self.graph.node_count() as i64;
        let e = self.graph.edge_count() as i64;
        1 + h0 == v - e + self.plane_face_count() as i64
    }

    /// Plane dual. Dual node `f` is face `f`; dual edge `e` joins the faces on the two
    /// sides of `e`, so the returned edge bijection is the identity. Dual darts keep
    /// their ids and the dual rotation at a face is its traversal order.
    pub fn dual(&self) -> Result<(PlaneGraph, Vec<EdgeId>)> {
        if !self.graph.is_connected() {
            return Err(Error::Disconnected);
        }
        if self.graph.edge_count() == 0 {
            return Err(Error::InvalidInput("dual of an edgeless graph".into()));
        }
        let mut dg = MultiGraph::new(self.faces.len());
        for e in 0..self.graph.edge_count() {
            dg.add_edge(self.face_of[2 * e], self.face_of[2 * e + 1]);
        }
        let rotation = self.faces.clone();
        let dual = PlaneGraph::new(dg, rotation, self.outer_dart)?;
        Ok((dual, (0..self.graph.edge_count()).collect()))
    }

    /// Whether `other` is the same embedding up to renaming nodes, with edge ids
    /// and dart orientations preserved.
    pub fn same_embedding(&self, other: &PlaneGraph) -> bool {
        let n = self.graph.node_count();
        if n != other.graph.node_count() || self.graph.edge_count() != other.graph.edge_count() {
            return false;
        }
        let mut map = vec![usize::MAX; n];
        for h in 0..2 * self.graph.edge_count() {
            let (a, b) = (self.tail(h), other.tail(h));
            if map[a] == usize::MAX {
                map[a] = b;
            } else if map[a] != b {
                return false;
            }
        }
        let mut image: Vec<usize> = map.clone();
        image.sort_unstable();
        image.dedup();
        if image.len() != n || image.contains(&usize::MAX) {
            return false;
        }
        (0..2 * self.graph.edge_count()).all(|h| self.succ(h) == other.succ(h))
    }

    /// Whether `other` has the same faces as edge sets (as a multiset).
    pub fn same_face_sets(&self, other: &PlaneGraph) -> bool {
        let key = |pg: &PlaneGraph| {
            let mut v: Vec<Vec<EdgeId>> = pg
                .faces
                .iter()
                .map(|f| {
                    let mut es: Vec<EdgeId> = f.iter().map(|&h| dart_edge(h)).collect();
                    es.sort_unstable();
                    es
                })
                .collect();
            v.sort();
            v
        };
        key(self) == key(other)
    }
}

fn tail_of(g: &MultiGraph, h: Dart) -> NodeId {
    let (a, b) = g.endpoints(dart_edge(h));
    if h.is_multiple_of(2) {
        a
    } else {
        b
    }
}

/// `plane_dual` with the edge bijection D.
pub fn plane_dual(g: &PlaneGraph) -> Result<(PlaneGraph, Vec<EdgeId>)> {
    g.dual()
}
