//! Block assignments, cuts, component maps and the balance predicate.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graph::{EdgeSet, MultiGraph, NodeId};

/// Assignment of every node to one of `k` blocks.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    k: usize,
    assign: Vec<usize>,
}

impl Partition {
    /// Builds a partition; fails if a block index is out of range, or if a block is
    /// empty while `allow_empty` is false.
    pub fn new(k: usize, assign: Vec<usize>, allow_empty: bool) -> Result<Self> {
        if let Some(&b) = assign.iter().find(|&&b| b >= k) {
            return Err(Error::InvalidInput(format!("block index {b} not below k = {k}")));
        }
        let p = Partition { k, assign };
        if !allow_empty && p.has_empty_block() {
            return Err(Error::InvalidInput("empty block not allowed".into()));
        }
        Ok(p)
    }

    /// Unchecked constructor for callers that already hold valid indices.
    pub fn from_assign(k: usize, assign: Vec<usize>) -> Self {
        debug_assert!(assign.iter().all(|&b| b < k));
        Partition { k, assign }
    }

    pub fn single_block(n: usize) -> Self {
        Partition { k: 1, assign: vec![0; n] }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn assign(&self) -> &[usize] {
        &self.assign
    }

    pub fn block_of(&self, v: NodeId) -> usize {
        self.assign[v]
    }

    pub fn set(&mut self, v: NodeId, b: usize) {
        assert!(b < self.k);
        self.assign[v] = b;
    }

    pub fn node_count(&self) -> usize {
        self.assign.len()
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        let mut s = vec![0; self.k];
        for &b in &self.assign {
            s[b] += 1;
        }
        s
    }

    pub fn has_empty_block(&self) -> bool {
        self.block_sizes().contains(&0)
    }

    pub fn blocks(&self) -> Vec<Vec<NodeId>> {
        let mut out = vec![Vec::new(); self.k];
        for (v, &b) in self.assign.iter().enumerate() {
            out[b].push(v);
        }
        out
    }

    pub fn members(&self, b: usize) -> Vec<bool> {
        self.assign.iter().map(|&x| x == b).collect()
    }

    /// Unordered canonical form: blocks relabelled by increasing minimum node,
    /// empty blocks last.
    pub fn canonical(&self) -> Partition {
        let mut rename = vec![usize::MAX; self.k];
        let mut next = 0;
        let assign = self
            .assign
            .iter()
            .map(|&b| {
                if rename[b] == usize::MAX {
                    rename[b] = next;
                    next += 1;
                }
                rename[b]
            })
            .collect();
        Partition { k: self.k, assign }
    }

    pub fn same_unordered(&self, other: &Partition) -> bool {
        self.k == other.k && self.canonical() == other.canonical()
    }

    /// Block weights under the graph's node weights.
    pub fn block_weights(&self, g: &MultiGraph) -> Vec<u64> {
        let mut w = vec![0u64; self.k];
        for (v, &b) in self.assign.iter().enumerate() {
            w[b] += g.weight(v);
        }
        w
    }
}

/// Edges whose endpoints lie in distinct blocks.
pub fn cut(g: &MultiGraph, p: &Partition) -> EdgeSet {
    let mut s = g.empty_edge_set();
    for (e, &(a, b)) in g.edges().iter().enumerate() {
        if p.block_of(a) != p.block_of(b) {
            s.insert(e);
        }
    }
    s
}

/// Partition into the connected components of g with the edges of `j` removed.
/// Blocks are numbered by increasing minimum node.
pub fn comp(g: &MultiGraph, j: &EdgeSet) -> Partition {
    let keep = g.full_edge_set().difference(j);
    let (label, count) = g.components_with(&keep);
    Partition { k: count.max(1), assign: label }.canonical()
}

/// Every nonempty block induces a connected subgraph.
pub fn is_connected_partition(g: &MultiGraph, p: &Partition) -> bool {
    (0..p.k()).all(|b| g.induces_connected(&p.members(b)))
}

/// Parses `a/b`, an integer, or a finite decimal such as `0.05` into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::InvalidInput(format!("not a rational number: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: BigInt = format!("{int}{frac}0").parse::<BigInt>().map_err(|_| bad())? / BigInt::from(10);
    let den = num_traits::pow(BigInt::from(10), frac.len());
    let r = BigRational::new(digits, den);
    Ok(if neg { -r } else { r })
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Exact ε-balance of a 2-partition: 1 − ε ≤ |A|/|B| ≤ 1 + ε in both directions.
/// Uses node weights when `weights` is given, block sizes otherwise.
pub fn is_eps_balanced(p: &Partition, eps: &BigRational, weights: Option<&[u64]>) -> Result<bool> {
    if eps < &BigRational::zero() {
        return Err(Error::InvalidInput("eps must be nonnegative".into()));
    }
    if p.k() != 2 {
        return Err(Error::InvalidInput("balance is defined for k = 2".into()));
    }
    let mut w = [0u64; 2];
    for (v, &b) in p.assign().iter().enumerate() {
        w[b] += weights.map_or(1, |ws| ws[v]);
    }
    Ok(ratio_balanced(w[0], w[1], eps))
}

/// (1 − ε)·b ≤ a ≤ (1 + ε)·b and the same with a, b swapped.
pub fn ratio_balanced(a: u64, b: u64, eps: &BigRational) -> bool {
    let a = BigRational::from_integer(BigInt::from(a));
    let b = BigRational::from_integer(BigInt::from(b));
    let lo = BigRational::one() - eps;
    let hi = BigRational::one() + eps;
    let within = |x: &BigRational, y: &BigRational| &lo * y <= *x && *x <= &hi * y;
    within(&a, &b) && within(&b, &a)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c4() -> MultiGraph {
        MultiGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)])
    }

    #[test]
    fn cut_examples() {
        let g = c4();
        let p = Partition::from_assign(2, vec![0, 0, 1, 1]);
        assert_eq!(cut(&g, &p).to_vec(), vec![1, 3]);
        assert!(cut(&g, &Partition::single_block(4)).is_empty());
        // 2x2 grid is C4; corner 0 alone
        let q = Partition::from_assign(2, vec![1, 0, 0, 0]);
        assert_eq!(cut(&g, &q).count(), 2);
    }

    #[test]
    fn comp_examples() {
        let g = c4();
        assert_eq!(comp(&g, &g.empty_edge_set()).k(), 1);
        assert_eq!(comp(&g, &g.full_edge_set()).k(), 4);
        let p = comp(&g, &EdgeSet::from_ids(4, [1, 3]));
        assert_eq!(p.assign(), &[0, 0, 1, 1]);
    }

    #[test]
    fn comp_inverts_cut_on_connected_partitions() {
        let g = c4();
        let p = Partition::from_assign(2, vec![1, 1, 0, 1]);
        assert!(is_connected_partition(&g, &p));
        assert!(comp(&g, &cut(&g, &p)).same_unordered(&p));
    }

    #[test]
    fn connectivity_and_balance() {
        let g = c4();
        let opposite = Partition::from_assign(2, vec![0, 1, 0, 1]);
        assert!(!is_connected_partition(&g, &opposite));
        let halves = Partition::from_assign(2, vec![0, 0, 1, 1]);
        assert!(is_eps_balanced(&halves, &rat(0, 1), None).unwrap());
        let p34 = Partition::from_assign(2, vec![0, 0, 0, 1, 1, 1, 1]);
        assert!(!is_eps_balanced(&p34, &rat(0, 1), None).unwrap());
        assert!(is_eps_balanced(&p34, &rat(1, 3), None).unwrap());
        assert!(is_eps_balanced(&p34, &rat(-1, 3), None).is_err());
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("0.05").unwrap(), rat(1, 20));
        assert_eq!(parse_rational("1/3").unwrap(), rat(1, 3));
        assert_eq!(parse_rational("2").unwrap(), rat(2, 1));
        assert_eq!(parse_rational("-.5").unwrap(), rat(-1, 2));
        assert!(parse_rational("abc").is_err());
    }

    #[test]
    fn canonical_sorts_by_min_node() {
        let p = Partition::from_assign(3, vec![2, 2, 0, 1]);
        assert_eq!(p.canonical().assign(), &[0, 0, 1, 2]);
    }
}
