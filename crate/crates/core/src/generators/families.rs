//! Graph families used by the experiments and tests.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{MultiGraph, NodeId};
use crate::partition::Partition;
use crate::plane::PlaneGraph;

/// Node coordinates, used for drawing and party assignment only.
pub type Layout = Vec<(f64, f64)>;

fn lattice(n: usize, m: usize) -> (MultiGraph, Layout) {
    let id = |x: usize, y: usize| y * n + x;
    let mut g = MultiGraph::new(n * m);
    for y in 0..m {
        for x in 0..n {
            if x + 1 < n {
                g.add_edge(id(x, y), id(x + 1, y));
            }
        }
    }
    for y in 0..m {
        for x in 0..n {
            if y + 1 < m {
                g.add_edge(id(x, y), id(x, y + 1));
            }
        }
    }
    let layout = (0..m).flat_map(|y| (0..n).map(move |x| (x as f64, y as f64))).collect();
    (g, layout)
}

/// The n × m grid: n columns, m rows, node (x, y) has id y·n + x.
pub fn grid(n: usize, m: usize) -> Result<(PlaneGraph, Layout)> {
    if n == 0 || m == 0 || n * m < 2 {
        return Err(Error::InvalidInput("grid needs at least two nodes".into()));
    }
    let (g, layout) = lattice(n, m);
    Ok((PlaneGraph::from_coords(g, &layout)?, layout))
}

/// The n × n grid with its four corners removed and each corner's two neighbours
/// joined by a diagonal.
pub fn shaved_grid(n: usize) -> Result<(PlaneGraph, Layout)> {
    if n < 3 {
        return Err(Error::InvalidInput("shaved grid needs n ≥ 3".into()));
    }
    let corner = |x: usize, y: usize| (x == 0 || x == n - 1) && (y == 0 || y == n - 1);
    let mut id = vec![usize::MAX; n * n];
    let mut layout = Vec::new();
    for y in 0..n {
        for x in 0..n {
            if !corner(x, y) {
                id[y * n + x] = layout.len();
                layout.push((x as f64, y as f64));
            }
        }
    }
    let at = |x: usize, y: usize| id[y * n + x];
    let mut g = MultiGraph::new(layout.len());
    for y in 0..n {
        for x in 0..n {
            if x + 1 < n && !corner(x, y) && !corner(x + 1, y) {
                g.add_edge(at(x, y), at(x + 1, y));
            }
        }
    }
    for y in 0..n {
        for x in 0..n {
            if y + 1 < n && !corner(x, y) && !corner(x, y + 1) {
                g.add_edge(at(x, y), at(x, y + 1));
            }
        }
    }
    let l = n - 1;
    for (a, b) in [((1, 0), (0, 1)), ((l - 1, 0), (l, 1)), ((0, l - 1), (1, l)), ((l, l - 1), (l - 1, l))] {
        g.add_edge(at(a.0, a.1), at(b.0, b.1));
    }
    Ok((PlaneGraph::from_coords(g, &layout)?, layout))
}

pub const GATE_SIDE: usize = 36;

/// Whether the gate graph of width `w` has a diagonal leaving node (x, y).
pub fn gate_has_diagonal(w: usize, x: usize, y: usize, strict_zero: bool) -> bool {
    if strict_zero && w == 0 {
        return false;
    }
    (12..=20).contains(&y) && (x <= 6 * w || (34usize.saturating_sub(6 * w) <= x && x <= 34))
}

/// The 36 × 36 grid with a band of alternating diagonals in rows 12..=20 growing
/// in from both sides. `strict_zero` drops the single-column diagonals at w = 0.
pub fn gate_graph(w: usize, strict_zero: bool) -> Result<(MultiGraph, Layout)> {
    if w > 3 {
        return Err(Error::InvalidInput(format!("gate width {w} outside [0, 3]")));
    }
    let s = GATE_SIDE;
    let (mut g, layout) = lattice(s, s);
    let id = |x: usize, y: usize| y * s + x;
    for y in 0..s {
        for x in 0..s {
            if gate_has_diagonal(w, x, y, strict_zero) {
                if x % 2 == 0 {
                    g.add_edge(id(x, y), id(x + 1, y + 1));
                } else {
                    g.add_edge(id(x, y), id(x + 1, y - 1));
                }
            }
        }
    }
    Ok((g, layout))
}

/// n columns by 2n rows: the lower n rows form a square lattice, and every unit
/// square in the upper n rows gets a "/" diagonal, making a triangular lattice.
pub fn franken_graph(n: usize) -> Result<(MultiGraph, Layout)> {
    if n < 2 {
        return Err(Error::InvalidInput("franken graph needs n ≥ 2".into()));
    }
    let (mut g, layout) = lattice(n, 2 * n);
    for y in n..2 * n - 1 {
        for x in 0..n - 1 {
            g.add_edge(y * n + x, (y + 1) * n + x + 1);
        }
    }
    Ok((g, layout))
}

/// How to split a laid-out graph into an initial 2-partition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InitialSplit {
    /// The lower half of the nodes ordered by (y, x).
    Horizontal,
    /// The lower-left half ordered by (x + y, x).
    Diagonal,
}

/// Half of the nodes (rounded down) in block 0, chosen in layout order.
pub fn initial_partition(layout: &[(f64, f64)], split: InitialSplit) -> Partition {
    let n = layout.len();
    let key = |v: NodeId| match split {
        InitialSplit::Horizontal => (layout[v].1, layout[v].0),
        InitialSplit::Diagonal => (layout[v].0 + layout[v].1, layout[v].0),
    };
    let mut order: Vec<NodeId> = (0..n).collect();
    order.sort_by(|&a, &b| {
        let (ka, kb) = (key(a), key(b));
        ka.0.total_cmp(&kb.0).then(ka.1.total_cmp(&kb.1)).then(a.cmp(&b))
    });
    let mut assign = vec![1; n];
    for &v in &order[..n / 2] {
        assign[v] = 0;
    }
    Partition::from_assign(2, assign)
}

/// A random two-terminal series-parallel multigraph with `m` edges, grown from a
/// single edge by repeated subdivision and duplication. Terminals are nodes 0 and 1.
pub fn random_sp_graph<R: Rng + ?Sized>(m: usize, rng: &mut R) -> MultiGraph {
    let mut edges = vec![(0, 1)];
    let mut n = 2;
    while edges.len() < m.max(1) {
        let i = rng.gen_range(0..edges.len());
        let (u, v) = edges[i];
        if rng.gen_bool(0.5) {
            edges[i] = (u, n);
            edges.push((n, v));
            n += 1;
        } else {
            edges.push((u, v));
        }
    }
    MultiGraph::from_edges(n, &edges)
}

fn segments_cross(a: (f64, f64), b: (f64, f64), c: (f64, f64), d: (f64, f64)) -> bool {
    let orient = |p: (f64, f64), q: (f64, f64), r: (f64, f64)| (q.0 - p.0) * (r.1 - p.1) - (q.1 - p.1) * (r.0 - p.0);
    let (o1, o2) = (orient(a, b, c), orient(a, b, d));
    let (o3, o4) = (orient(c, d, a), orient(c, d, b));
    o1 * o2 < 0.0 && o3 * o4 < 0.0
}

/// A random bridgeless straight-line plane graph on `n ≥ 3` nodes: a greedy
/// noncrossing triangulation of random points, from which each edge is then
/// dropped with probability `1 − keep` unless that would create a bridge.
pub fn random_plane_graph<R: Rng + ?Sized>(n: usize, keep: f64, rng: &mut R) -> Result<(PlaneGraph, Layout)> {
    if n < 3 {
        return Err(Error::InvalidInput("need at least three nodes".into()));
    }
    let layout: Layout = (0..n).map(|_| (rng.gen::<f64>(), rng.gen::<f64>())).collect();
    let mut pairs: Vec<(NodeId, NodeId)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    pairs.shuffle(rng);
    let mut chosen: Vec<(NodeId, NodeId)> = Vec::new();
    for (u, v) in pairs {
        let clear = chosen.iter().all(|&(a, b)| {
            a == u || a == v || b == u || b == v || !segments_cross(layout[u], layout[v], layout[a], layout[b])
        });
        if clear {
            chosen.push((u, v));
        }
    }
    let g = MultiGraph::from_edges(n, &chosen);
    let mut kept = g.full_edge_set();
    let mut order: Vec<usize> = (0..g.edge_count()).collect();
    order.shuffle(rng);
    for e in order {
        if rng.gen_bool(keep) {
            continue;
        }
        kept.remove(e);
        let (label, comps) = g.components_with(&kept);
        if comps != 1 || label.len() != n || !g.bridges_in(&kept).is_empty() {
            kept.insert(e);
        }
    }
    let (h, _) = g.delete_edges(&g.full_edge_set().difference(&kept));
    Ok((PlaneGraph::from_coords(h, &layout)?, layout))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::is_connected_partition;
    use crate::samplers::seeded_rng;
    use std::collections::BTreeSet;

    #[test]
    fn small_grids() {
        let (c4, _) = grid(2, 2).unwrap();
        assert_eq!((c4.graph().node_count(), c4.graph().edge_count()), (4, 4));
        assert!((0..4).all(|v| c4.graph().degree(v) == 2));
        let (g3, _) = grid(3, 3).unwrap();
        assert_eq!(g3.face_count() - 1, 4);
        assert!(g3.euler_holds());
        assert!(grid(1, 1).is_err());
    }

    /// Checks that the bounded faces of the dual sit on an (n−1) × (n−1) cell
    /// lattice with grid adjacency and that the outer face touches each boundary cell once.
    fn check_shaved_dual(n: usize) {
        let (pg, layout) = shaved_grid(n).unwrap();
        assert!(pg.euler_holds());
        let (dual, _) = pg.dual().unwrap();
        assert!(dual.graph().is_simple(), "n = {n}");
        let outer = pg.outer_face().unwrap();
        let cells = n - 1;
        assert_eq!(pg.face_count(), cells * cells + 1);
        let mut cell_of = vec![(usize::MAX, usize::MAX); pg.face_count()];
        let mut seen = BTreeSet::new();
        for f in 0..pg.face_count() {
            if f == outer {
                continue;
            }
            let nodes = pg.face_nodes(f);
            let cx = nodes.iter().map(|&v| layout[v].0).sum::<f64>() / nodes.len() as f64;
            let cy = nodes.iter().map(|&v| layout[v].1).sum::<f64>() / nodes.len() as f64;
            cell_of[f] = (cx.floor() as usize, cy.floor() as usize);
            assert!(seen.insert(cell_of[f]));
        }
        let mut adj = BTreeSet::new();
        let mut outer_nbrs = BTreeSet::new();
        for &(a, b) in dual.graph().edges() {
            if a == outer || b == outer {
                outer_nbrs.insert(cell_of[a + b - outer]);
            } else {
                let (p, q) = (cell_of[a].min(cell_of[b]), cell_of[a].max(cell_of[b]));
                adj.insert((p, q));
            }
        }
        let mut expect = BTreeSet::new();
        let mut boundary = BTreeSet::new();
        for x in 0..cells {
            for y in 0..cells {
                if x + 1 < cells {
                    expect.insert(((x, y), (x + 1, y)));
                }
                if y + 1 < cells {
                    expect.insert(((x, y), (x, y + 1)));
                }
                if x == 0 || y == 0 || x + 1 == cells || y + 1 == cells {
                    boundary.insert((x, y));
                }
            }
        }
        assert_eq!(adj, expect);
        assert_eq!(outer_nbrs, boundary);
    }

    #[test]
    fn shaved_grid_duals() {
        for n in 3..=8 {
            check_shaved_dual(n);
        }
        assert!(shaved_grid(2).is_err());
    }

    #[test]
    fn gate_graph_shapes() {
        let (g0, _) = gate_graph(0, true).unwrap();
        assert_eq!(g0.edge_count(), 2520);
        let (g0l, _) = gate_graph(0, false).unwrap();
        assert_eq!(g0l.edge_count(), 2520 + 18);
        for w in 0..=3 {
            let (g, layout) = gate_graph(w, false).unwrap();
            let mut diag = BTreeSet::new();
            for &(a, b) in &g.edges()[2520..] {
                let (pa, pb) = (layout[a], layout[b]);
                assert_eq!((pa.0 - pb.0).abs(), 1.0);
                assert_eq!((pa.1 - pb.1).abs(), 1.0);
                assert!((12.0..=20.0).contains(&pa.1));
                diag.insert(a);
            }
            for v in 0..g.node_count() {
                let (x, y) = (layout[v].0 as usize, layout[v].1 as usize);
                assert_eq!(diag.contains(&v), gate_has_diagonal(w, x, y, false));
            }
            assert!(PlaneGraph::from_coords(g, &layout).unwrap().euler_holds());
        }
        let full = (0..=34).all(|x| gate_has_diagonal(3, x, 15, false));
        assert!(full && !gate_has_diagonal(2, 17, 15, false));
        assert!(gate_graph(4, false).is_err());
    }

    #[test]
    fn franken_faces() {
        for n in [2, 3, 5] {
            let (g, layout) = franken_graph(n).unwrap();
            assert_eq!(g.edge_count() - (n - 1) * 2 * n - n * (2 * n - 1), (n - 1) * (n - 1));
            let pg = PlaneGraph::from_coords(g, &layout).unwrap();
            let outer = pg.outer_face().unwrap();
            for f in (0..pg.face_count()).filter(|&f| f != outer) {
                let top = pg.face_nodes(f).iter().map(|&v| layout[v].1).fold(f64::MIN, f64::max);
                let expect = if top > n as f64 { 3 } else { 4 };
                assert_eq!(pg.face_degree(f), expect);
            }
        }
    }

    #[test]
    fn initial_splits_are_connected() {
        for (n, m) in [(4, 4), (5, 3), (20, 20)] {
            let (pg, layout) = grid(n, m).unwrap();
            for s in [InitialSplit::Horizontal, InitialSplit::Diagonal] {
                let p = initial_partition(&layout, s);
                assert!(is_connected_partition(pg.graph(), &p));
                assert_eq!(p.block_sizes()[0], n * m / 2);
            }
        }
    }

    #[test]
    fn random_families() {
        let mut rng = seeded_rng(12);
        for m in 1..15 {
            let g = random_sp_graph(m, &mut rng);
            assert_eq!(g.edge_count(), m);
            assert!(crate::spdp::recognize_sp(&g, 0, 1).is_ok());
        }
        for n in 3..10 {
            let (pg, _) = random_plane_graph(n, 0.3, &mut rng).unwrap();
            let g = pg.graph();
            assert!(g.is_connected() && g.is_simple() && pg.euler_holds());
            assert!(g.bridges_in(&g.full_edge_set()).is_empty());
        }
        assert!(random_plane_graph(2, 0.5, &mut rng).is_err());
    }
}
