//! The JSON graph format and gadget provenance sidecars.
//!
//! ```json
//! {"nodes": 4, "edges": [[0, 0, 1], [1, 1, 2]], "weights": {"0": 3},
//!  "rotation": {"0": [0], "1": [1, 2]}, "outer_dart": 0, "coords": {"0": [0.0, 0.0]}}
//! ```
//!
//! Edge rows are `[id, u, v]` with dense ids. Rotation lists hold darts: `2·id`
//! leaves `u`, `2·id + 1` leaves `v`, in counter-clockwise order. `weights`,
//! `rotation`, `outer_dart` and `coords` are optional.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::families::Layout;
use crate::error::{Error, Result};
use crate::gadgets::{GadgetKind, GadgetMap};
use crate::graph::{EdgeId, MultiGraph, NodeId};
use crate::plane::PlaneGraph;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub nodes: usize,
    pub edges: Vec<[usize; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<BTreeMap<String, u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rotation: Option<BTreeMap<String, Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outer_dart: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coords: Option<BTreeMap<String, [f64; 2]>>,
}

/// A graph as loaded from disk, with whatever embedding and layout it carried.
#[derive(Clone, Debug)]
pub struct LoadedGraph {
    pub graph: MultiGraph,
    pub plane: Option<PlaneGraph>,
    pub layout: Option<Layout>,
}

impl LoadedGraph {
    /// The embedding, or an error naming the missing rotation system.
    pub fn require_plane(&self) -> Result<&PlaneGraph> {
        self.plane.as_ref().ok_or_else(|| Error::InvalidEmbedding("graph file has no rotation system".into()))
    }
}

fn schema(location: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Schema { location: location.into(), message: message.into() }
}

fn node_map<T: Clone>(map: &BTreeMap<String, T>, n: usize, field: &str) -> Result<Vec<Option<T>>> {
    let mut out = vec![None; n];
    for (key, value) in map {
        let v: NodeId = key.parse().map_err(|_| schema(format!("{field}.{key}"), "key is not a node id"))?;
        if v >= n {
            return Err(schema(format!("{field}.{key}"), format!("node out of range 0..{n}")));
        }
        out[v] = Some(value.clone());
    }
    Ok(out)
}

impl GraphFile {
    pub fn from_graph(g: &MultiGraph) -> Self {
        GraphFile {
            nodes: g.node_count(),
            edges: g.edges().iter().enumerate().map(|(e, &(u, v))| [e, u, v]).collect(),
            weights: g.weights().map(|w| w.iter().enumerate().map(|(v, &x)| (v.to_string(), x)).collect()),
            ..Default::default()
        }
    }

    pub fn from_plane(pg: &PlaneGraph) -> Self {
        GraphFile {
            rotation: Some(pg.rotation().iter().enumerate().map(|(v, r)| (v.to_string(), r.clone())).collect()),
            outer_dart: pg.outer_dart(),
            ..Self::from_graph(pg.graph())
        }
    }

    pub fn with_layout(mut self, layout: &[(f64, f64)]) -> Self {
        self.coords = Some(layout.iter().enumerate().map(|(v, &(x, y))| (v.to_string(), [x, y])).collect());
        self
    }

    pub fn to_graph(&self) -> Result<LoadedGraph> {
        let n = self.nodes;
        let mut g = MultiGraph::new(n);
        for (i, row) in self.edges.iter().enumerate() {
            let [id, u, v] = *row;
            if id != i {
                return Err(schema(format!("edges[{i}]"), format!("edge id {id}, expected dense id {i}")));
            }
            for x in [u, v] {
                g.check_node(x).map_err(|e| schema(format!("edges[{i}]"), e.to_string()))?;
            }
            g.add_edge(u, v);
        }
        if let Some(w) = &self.weights {
            let w = node_map(w, n, "weights")?;
            g.set_weights(Some(w.into_iter().map(|x| x.unwrap_or(0)).collect()));
        }
        let layout = match &self.coords {
            None => None,
            Some(c) => {
                let c = node_map(c, n, "coords")?;
                let missing = c.iter().position(Option::is_none);
                if let Some(v) = missing {
                    return Err(schema(format!("coords.{v}"), "missing coordinate"));
                }
                Some(c.into_iter().map(|p| p.map(|[x, y]| (x, y)).expect("checked")).collect())
            }
        };
        let plane = match &self.rotation {
            None => None,
            Some(r) => {
                let r = node_map(r, n, "rotation")?;
                let rot = r.into_iter().map(Option::unwrap_or_default).collect();
                let pg = PlaneGraph::new(g.clone(), rot, self.outer_dart)
                    .map_err(|e| schema("rotation", e.to_string()))?;
                Some(pg)
            }
        };
        Ok(LoadedGraph { graph: g, plane, layout })
    }

    /// Canonical pretty-printed JSON.
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| schema(format!("line {} column {}", e.line(), e.column()), e.to_string()))
    }
}

pub fn ingest(path: &Path) -> Result<LoadedGraph> {
    GraphFile::from_json(&fs::read_to_string(path)?)?.to_graph()
}

pub fn export(file: &GraphFile, path: &Path) -> Result<()> {
    fs::write(path, file.to_json()?)?;
    Ok(())
}

/// Provenance sidecar of a gadget construction: the base graph plus the map from
/// base edges and cells to derived edges.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GadgetSidecar {
    pub kind: GadgetKind,
    pub base: GraphFile,
    pub per_base_edge: Vec<Vec<EdgeId>>,
    pub per_base_cell: Vec<Vec<EdgeId>>,
    pub original_nodes: Vec<NodeId>,
    /// Base edge of every derived edge, `null` for gadget-internal edges.
    pub provenance: Vec<Option<EdgeId>>,
}

impl GadgetSidecar {
    pub fn from_map(m: &GadgetMap) -> Self {
        GadgetSidecar {
            kind: m.kind.clone(),
            base: GraphFile::from_graph(&m.base),
            per_base_edge: m.per_base_edge.clone(),
            per_base_cell: m.per_base_cell.clone(),
            original_nodes: m.original_nodes.clone(),
            provenance: m.edge_provenance(),
        }
    }

    /// Rebuild the gadget map from the sidecar and the derived graph file.
    pub fn to_map(&self, derived: &GraphFile) -> Result<GadgetMap> {
        let base = self.base.to_graph()?.graph;
        let loaded = derived.to_graph()?;
        let m = loaded.graph.edge_count();
        if self.per_base_edge.len() != base.edge_count() {
            return Err(schema("per_base_edge", "one entry per base edge required"));
        }
        if let Some(bad) = self.per_base_edge.iter().flatten().chain(self.per_base_cell.iter().flatten()).find(|&&e| e >= m) {
            return Err(schema("per_base_edge", format!("derived edge {bad} out of range")));
        }
        if self.original_nodes.len() != base.node_count() || self.original_nodes.iter().any(|&v| v >= loaded.graph.node_count()) {
            return Err(schema("original_nodes", "one derived node per base node required"));
        }
        let map = GadgetMap {
            kind: self.kind.clone(),
            base,
            derived: loaded.graph,
            plane: loaded.plane,
            per_base_edge: self.per_base_edge.clone(),
            per_base_cell: self.per_base_cell.clone(),
            original_nodes: self.original_nodes.clone(),
        };
        if map.edge_provenance() != self.provenance {
            return Err(schema("provenance", "does not match per_base_edge"));
        }
        Ok(map)
    }
}

/// Derived graph file of a gadget map, embedded when the map carries an embedding.
pub fn gadget_graph_file(m: &GadgetMap) -> GraphFile {
    match &m.plane {
        Some(pg) => GraphFile::from_plane(pg),
        None => GraphFile::from_graph(&m.derived),
    }
}
