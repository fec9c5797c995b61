//! The three-block partition tables X(G, w) on SP-trees and exact counting of
//! balanced connected 2-partitions.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::Zero;

use super::sptree::{recognize_sp_any, SPTree, SpKind};
use crate::error::{Error, Result};
use crate::graph::{MultiGraph, NodeId};

/// An element of ℕ × {∅, ¬∅}: `None` is the empty set, `Some(n)` a nonempty set of weight n.
pub type MonoidWeight = Option<u64>;

pub fn mw_add(a: MonoidWeight, b: MonoidWeight) -> MonoidWeight {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(x), Some(y)) => Some(x + y),
    }
}

/// Key of a table entry: block weights (a₁, a₂, a₃) and whether some edge joins V₁ to V₃.
/// The adjacency bit is needed for parallel merges: a split σ-block/τ-block pair may
/// only be rejoined through the other side when the two blocks do not touch, since
/// otherwise the same partition is already counted by the unsplit entry.
pub type XKey = (MonoidWeight, MonoidWeight, MonoidWeight, bool);

/// X(G, w): counts of partitions (V₁, V₂, V₃) into connected blocks, σ ∈ V₁, and τ ∈ V₃
/// exactly when V₃ is nonempty (otherwise τ ∈ V₁).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DPTableX {
    pub entries: BTreeMap<XKey, BigUint>,
}

impl DPTableX {
    fn bump(&mut self, key: XKey, m: BigUint) {
        *self.entries.entry(key).or_insert_with(BigUint::zero) += m;
    }

    /// X(G, w)(a₁, a₂, a₃), summed over the adjacency bit.
    pub fn get(&self, a1: MonoidWeight, a2: MonoidWeight, a3: MonoidWeight) -> BigUint {
        [false, true].iter().filter_map(|&t| self.entries.get(&(a1, a2, a3, t))).sum()
    }

    /// The table keyed by weights alone.
    pub fn collapsed(&self) -> BTreeMap<(MonoidWeight, MonoidWeight, MonoidWeight), BigUint> {
        let mut out = BTreeMap::new();
        for (&(a1, a2, a3, _), m) in &self.entries {
            *out.entry((a1, a2, a3)).or_insert_with(BigUint::zero) += m;
        }
        out
    }

    pub fn total(&self) -> BigUint {
        self.entries.values().sum()
    }

    /// The same table for the graph with σ and τ exchanged.
    pub fn reversed(&self) -> DPTableX {
        let mut out = DPTableX::default();
        for (&(a1, a2, a3, t), m) in &self.entries {
            let key = if a3.is_none() { (a1, a2, a3, t) } else { (a3, a2, a1, t) };
            out.bump(key, m.clone());
        }
        out
    }

    /// Drop entries that cannot extend to a balanced split of total weight 2·half.
    fn prune(&mut self, half: u64) {
        self.entries.retain(|&(a1, a2, a3, _), _| {
            let over = |x: MonoidWeight| x.is_some_and(|n| n > half);
            !over(a1) && !over(a3) && (a2.is_none() || a2 == Some(half))
        });
    }
}

/// Table of a single edge σ–τ with weights `ws`, `wt`.
pub fn leaf_table(ws: u64, wt: u64) -> DPTableX {
    let mut x = DPTableX::default();
    x.bump((Some(ws + wt), None, None, false), BigUint::from(1u32));
    x.bump((Some(ws), None, Some(wt), true), BigUint::from(1u32));
    x
}

/// Series composition G₁ ∘ G₂, with τ₁ = σ₂.
pub fn series_table(x1: &DPTableX, x2: &DPTableX) -> DPTableX {
    let mut f = DPTableX::default();
    for (&(a1, a2, a3, ta), m1) in &x1.entries {
        for (&(b1, b2, b3, tb), m2) in &x2.entries {
            let one_v2 = a2.is_none() || b2.is_none();
            let m = || m1 * m2;
            match (a3.is_none(), b3.is_none()) {
                (true, true) if one_v2 => f.bump((mw_add(a1, b1), mw_add(a2, b2), None, false), m()),
                (true, false) if one_v2 => f.bump((mw_add(a1, b1), mw_add(a2, b2), b3, tb), m()),
                (false, true) if one_v2 => f.bump((a1, mw_add(a2, b2), mw_add(a3, b1), ta), m()),
                (false, false) if a2.is_none() && b2.is_none() => f.bump((a1, mw_add(a3, b1), b3, false), m()),
                _ => {}
            }
        }
    }
    f
}

/// Parallel composition G₁ ∥ G₂ on shared terminals.
pub fn parallel_table(x1: &DPTableX, x2: &DPTableX) -> DPTableX {
    let mut f = DPTableX::default();
    for (&(a1, a2, a3, ta), m1) in &x1.entries {
        for (&(b1, b2, b3, tb), m2) in &x2.entries {
            if a2.is_some() && b2.is_some() {
                continue;
            }
            let v2 = mw_add(a2, b2);
            let m = m1 * m2;
            match (a3.is_none(), b3.is_none()) {
                (true, true) => f.bump((mw_add(a1, b1), v2, None, false), m),
                (true, false) if !tb => f.bump((mw_add(mw_add(a1, b1), b3), v2, None, false), m),
                (false, true) if !ta => f.bump((mw_add(mw_add(a1, b1), a3), v2, None, false), m),
                (false, false) => f.bump((mw_add(a1, b1), v2, mw_add(a3, b3), ta || tb), m),
                _ => {}
            }
        }
    }
    f
}

/// X(G, w) at the root of `tree`. Each node's weight is carried by the first leaf
/// touching it; the other leaves give it (0, ¬∅). With `prune_half`, entries that
/// cannot reach a split into two halves of that weight are discarded.
pub fn table_x(tree: &SPTree, w: &[u64], prune_half: Option<u64>) -> DPTableX {
    let mut owned = vec![false; w.len()];
    let mut take = |v: NodeId| -> u64 {
        if owned[v] {
            0
        } else {
            owned[v] = true;
            w[v]
        }
    };
    let mut tables: Vec<DPTableX> = Vec::with_capacity(tree.nodes.len());
    for node in &tree.nodes {
        let mut x = match node.kind {
            SpKind::Leaf(_) => {
                let ws = take(node.s);
                let wt = take(node.t);
                leaf_table(ws, wt)
            }
            SpKind::Series(a, b, mid) => {
                let x1 = orient(&tables[a], tree.nodes[a].s == node.s);
                let x2 = orient(&tables[b], tree.nodes[b].s == mid);
                series_table(&x1, &x2)
            }
            SpKind::Parallel(a, b) => {
                let x1 = orient(&tables[a], tree.nodes[a].s == node.s);
                let x2 = orient(&tables[b], tree.nodes[b].s == node.s);
                parallel_table(&x1, &x2)
            }
        };
        if let Some(h) = prune_half {
            x.prune(h);
        }
        tables.push(x);
    }
    tables.pop().expect("nonempty tree")
}

fn orient(x: &DPTableX, aligned: bool) -> std::borrow::Cow<'_, DPTableX> {
    if aligned {
        std::borrow::Cow::Borrowed(x)
    } else {
        std::borrow::Cow::Owned(x.reversed())
    }
}

/// |P₂⁰(G, w)|: unordered connected 2-partitions, both blocks nonempty, of equal weight.
pub fn count_balanced_tree(tree: &SPTree, w: &[u64]) -> BigUint {
    let total: u64 = w.iter().sum();
    if total % 2 == 1 {
        return BigUint::zero();
    }
    let half = total / 2;
    let x = table_x(tree, w, Some(half));
    x.get(Some(half), Some(half), None) + x.get(Some(half), None, Some(half))
}

/// |P₂⁰(G, w)| for a series-parallel graph (weights default to the graph's own).
pub fn count_balanced(g: &MultiGraph, w: Option<&[u64]>) -> Result<BigUint> {
    let weights: Vec<u64> = match w.or(g.weights()) {
        Some(w) if w.len() == g.node_count() => w.to_vec(),
        Some(_) => return Err(Error::InvalidInput("one weight per node required".into())),
        None => vec![1; g.node_count()],
    };
    if g.node_count() < 2 {
        return Ok(BigUint::zero());
    }
    let tree = recognize_sp_any(g)?;
    Ok(count_balanced_tree(&tree, &weights))
}
