//! The flip-walk state graph on P₂(G), its exact kernel, bottleneck ratios,
//! conductance and the purification structure DP₂^C.

use std::collections::{HashMap, VecDeque};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graph::MultiGraph;
use crate::oracle::partitions::{enum_connected_partitions, EnumOptions};
use crate::partition::{cut, Partition};
use crate::plane::PlaneGraph;

/// Admissibility constraints for states of the flip walk.
#[derive(Clone, Debug)]
pub struct FlipConstraints {
    pub ordered: bool,
    pub allow_empty: bool,
    /// Allowed deviation as a fraction of the ideal block weight (0.9 for 90%).
    pub apd: Option<BigRational>,
    pub state_guard: usize,
}

impl Default for FlipConstraints {
    fn default() -> Self {
        FlipConstraints { ordered: true, allow_empty: true, apd: None, state_guard: super::DEFAULT_STATE_GUARD }
    }
}

/// Flip-walk state graph for k = 2. `moves[s][v]` is the state reached by flipping
/// node `v` in state `s`, or `s` itself when the flip is inadmissible.
#[derive(Clone, Debug)]
pub struct MetaGraph {
    pub states: Vec<Partition>,
    pub moves: Vec<Vec<usize>>,
    pub degree: usize,
    index: HashMap<Vec<usize>, usize>,
    ordered: bool,
}

/// Whether block weights lie in [ideal(1 − x), ideal(1 + x)] with ideal = W/k.
pub fn within_apd(block_weights: &[u64], apd: &BigRational) -> bool {
    let k = BigInt::from(block_weights.len());
    let total = BigInt::from(block_weights.iter().sum::<u64>());
    let lo = (BigRational::one() - apd) * BigRational::from_integer(total.clone());
    let hi = (BigRational::one() + apd) * BigRational::from_integer(total);
    block_weights.iter().all(|&w| {
        let kw = BigRational::from_integer(&k * BigInt::from(w));
        lo <= kw && kw <= hi
    })
}

pub fn build_flip_metagraph(g: &MultiGraph, c: &FlipConstraints) -> Result<MetaGraph> {
    let opts = EnumOptions { ordered: c.ordered, allow_empty: c.allow_empty, state_guard: c.state_guard, ..Default::default() };
    let mut states = enum_connected_partitions(g, 2, &opts)?;
    if let Some(apd) = &c.apd {
        states.retain(|p| within_apd(&p.block_weights(g), apd));
    }
    let index: HashMap<Vec<usize>, usize> = states.iter().enumerate().map(|(i, p)| (p.assign().to_vec(), i)).collect();
    let n = g.node_count();
    let moves = states
        .iter()
        .enumerate()
        .map(|(s, p)| {
            (0..n)
                .map(|v| {
                    let mut a = p.assign().to_vec();
                    a[v] = 1 - a[v];
                    let mut q = Partition::from_assign(2, a);
                    if !c.ordered {
                        q = q.canonical();
                    }
                    index.get(q.assign()).copied().unwrap_or(s)
                })
                .collect()
        })
        .collect();
    Ok(MetaGraph { states, moves, degree: n, index, ordered: c.ordered })
}

impl MetaGraph {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn index_of(&self, p: &Partition) -> Option<usize> {
        let key = if self.ordered { p.clone() } else { p.canonical() };
        self.index.get(key.assign()).copied()
    }

    /// Total degree of a state counting self-loops.
    pub fn state_degree(&self, s: usize) -> usize {
        self.moves[s].len()
    }

    /// Strong connectivity of the (symmetric) state graph.
    pub fn is_irreducible(&self) -> bool {
        if self.states.is_empty() {
            return true;
        }
        let mut seen = vec![false; self.len()];
        seen[0] = true;
        let mut queue = VecDeque::from([0]);
        let mut count = 1;
        while let Some(s) = queue.pop_front() {
            for &t in &self.moves[s] {
                if !seen[t] {
                    seen[t] = true;
                    count += 1;
                    queue.push_back(t);
                }
            }
        }
        count == self.len()
    }

    /// Cut size of every state.
    pub fn cut_sizes(&self, g: &MultiGraph) -> Vec<usize> {
        self.states.iter().map(|p| cut(g, p).count()).collect()
    }

    /// Exact lazy Metropolis kernel targeting ν_λ ∝ λ^{|cut|}: hold with probability
    /// `laziness`, otherwise flip a uniform node and accept with min(1, λ^{Δcut}).
    /// Rows are sparse `(target, probability)` lists sorted by target.
    pub fn kernel(&self, g: &MultiGraph, lambda: &BigRational, laziness: &BigRational) -> Vec<Vec<(usize, BigRational)>> {
        let cuts = self.cut_sizes(g);
        let step = (BigRational::one() - laziness) / BigRational::from_integer(BigInt::from(self.degree));
        self.moves
            .iter()
            .enumerate()
            .map(|(s, row)| {
                let mut acc: HashMap<usize, BigRational> = HashMap::new();
                *acc.entry(s).or_insert_with(BigRational::zero) += laziness;
                for &t in row {
                    if t == s {
                        *acc.entry(s).or_insert_with(BigRational::zero) += &step;
                        continue;
                    }
                    let a = acceptance(lambda, cuts[t] as i64 - cuts[s] as i64);
                    *acc.entry(t).or_insert_with(BigRational::zero) += &step * &a;
                    *acc.entry(s).or_insert_with(BigRational::zero) += &step * (BigRational::one() - a);
                }
                let mut v: Vec<(usize, BigRational)> = acc.into_iter().collect();
                v.sort_by_key(|x| x.0);
                v
            })
            .collect()
    }
}

/// min(1, λ^δ) exactly.
pub fn acceptance(lambda: &BigRational, delta: i64) -> BigRational {
    let p = if delta >= 0 {
        num_traits::pow(lambda.clone(), delta as usize)
    } else {
        num_traits::pow(lambda.recip(), (-delta) as usize)
    };
    if p > BigRational::one() {
        BigRational::one()
    } else {
        p
    }
}

/// |∂U| / (2d|U|), the bottleneck ratio of a set of states.
pub fn bottleneck_ratio(mg: &MetaGraph, subset: &[usize]) -> Result<BigRational> {
    if subset.is_empty() {
        return Err(Error::InvalidInput("bottleneck ratio of an empty set".into()));
    }
    let mut inside = vec![false; mg.len()];
    for &s in subset {
        inside[s] = true;
    }
    let boundary: usize = subset.iter().map(|&s| mg.moves[s].iter().filter(|&&t| !inside[t]).count()).sum();
    Ok(BigRational::new(BigInt::from(boundary), BigInt::from(2 * mg.degree * subset.len())))
}

/// Edge boundary size |∂U| counted with multiplicity.
pub fn edge_boundary(mg: &MetaGraph, subset: &[usize]) -> usize {
    let mut inside = vec![false; mg.len()];
    for &s in subset {
        inside[s] = true;
    }
    subset.iter().map(|&s| mg.moves[s].iter().filter(|&&t| !inside[t]).count()).sum()
}

/// Maximum state count for the exhaustive conductance scan.
pub const CONDUCTANCE_SCAN_LIMIT: usize = 20;

/// Φ = min over nonempty U with |U| ≤ |S|/2 of the bottleneck ratio, by full scan.
pub fn exact_conductance(mg: &MetaGraph) -> Result<BigRational> {
    let n = mg.len();
    if n > CONDUCTANCE_SCAN_LIMIT {
        return Err(Error::GuardExceeded {
            what: "states for exact conductance (use bottleneck_ratio or conductance_bound)".into(),
            size: n,
            limit: CONDUCTANCE_SCAN_LIMIT,
        });
    }
    if n < 2 {
        return Err(Error::InvalidInput("conductance needs at least two states".into()));
    }
    let mut best: Option<BigRational> = None;
    for mask in 1u32..(1u32 << n) {
        if mask.count_ones() as usize > n / 2 {
            continue;
        }
        let subset: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        let r = bottleneck_ratio(mg, &subset)?;
        if best.as_ref().is_none_or(|b| &r < b) {
            best = Some(r);
        }
    }
    Ok(best.expect("at least one candidate subset"))
}

/// A conductance value, flagged when it is only an upper bound.
#[derive(Clone, Debug, PartialEq)]
pub struct Conductance {
    pub value: BigRational,
    pub exact: bool,
}

/// Upper bound on Φ from candidate sets (e.g. fibers), each of size ≤ |S|/2.
pub fn conductance_bound(mg: &MetaGraph, candidates: &[Vec<usize>]) -> Result<Conductance> {
    if mg.len() <= CONDUCTANCE_SCAN_LIMIT && mg.len() >= 2 {
        return Ok(Conductance { value: exact_conductance(mg)?, exact: true });
    }
    let mut best: Option<BigRational> = None;
    for c in candidates {
        if c.is_empty() || 2 * c.len() > mg.len() {
            continue;
        }
        let r = bottleneck_ratio(mg, c)?;
        if best.as_ref().is_none_or(|b| &r < b) {
            best = Some(r);
        }
    }
    best.map(|value| Conductance { value, exact: false })
        .ok_or_else(|| Error::InvalidInput("no admissible candidate set".into()))
}

/// t_mix(1/4) ≥ 1/(4Φ).
pub fn mixing_lower_bound(phi: &BigRational) -> Result<BigRational> {
    if phi.is_zero() {
        return Err(Error::InvalidInput("conductance is zero".into()));
    }
    Ok((phi * BigRational::from_integer(4.into())).recip())
}

/// DP₂^C: flip edges between distinct states minus the purifying ones, the number of
/// mixed faces per state, and the directed-reachable set C_Q of each state.
#[derive(Clone, Debug)]
pub struct Purification {
    pub out_edges: Vec<Vec<usize>>,
    pub mixed_faces: Vec<usize>,
    pub reach: Vec<Vec<usize>>,
}

/// Per-face status for a 2-partition: `None` for mixed, `Some(block)` for pure.
pub fn face_status(pg: &PlaneGraph, p: &Partition) -> Vec<Option<usize>> {
    (0..pg.face_count())
        .map(|f| {
            let nodes = pg.face_nodes(f);
            let b = p.block_of(nodes[0]);
            nodes.iter().all(|&v| p.block_of(v) == b).then_some(b)
        })
        .collect()
}

pub fn mixed_face_count(pg: &PlaneGraph, p: &Partition) -> usize {
    face_status(pg, p).iter().filter(|s| s.is_none()).count()
}

pub fn purification_structure(mg: &MetaGraph, pg: &PlaneGraph) -> Purification {
    let status: Vec<Vec<Option<usize>>> = mg.states.iter().map(|p| face_status(pg, p)).collect();
    let mixed_faces = status.iter().map(|s| s.iter().filter(|x| x.is_none()).count()).collect();
    let out_edges: Vec<Vec<usize>> = (0..mg.len())
        .map(|s| {
            let mut out: Vec<usize> = mg.moves[s]
                .iter()
                .copied()
                .filter(|&t| t != s)
                .filter(|&t| !status[s].iter().zip(&status[t]).any(|(a, b)| a.is_none() && b.is_some()))
                .collect();
            out.sort_unstable();
            out.dedup();
            out
        })
        .collect();
    let reach = (0..mg.len())
        .map(|q| {
            let mut seen = vec![false; mg.len()];
            seen[q] = true;
            let mut queue = VecDeque::from([q]);
            while let Some(s) = queue.pop_front() {
                for &t in &out_edges[s] {
                    if !seen[t] {
                        seen[t] = true;
                        queue.push_back(t);
                    }
                }
            }
            (0..mg.len()).filter(|&i| seen[i]).collect()
        })
        .collect();
    Purification { out_edges, mixed_faces, reach }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::rat;

    fn c4() -> MultiGraph {
        MultiGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)])
    }

    #[test]
    fn regular_irreducible_uniform() {
        let g = c4();
        let mg = build_flip_metagraph(&g, &FlipConstraints::default()).unwrap();
        assert!((0..mg.len()).all(|s| mg.state_degree(s) == 4));
        assert!(mg.is_irreducible());
        let k = mg.kernel(&g, &rat(1, 1), &rat(1, 2));
        let n = mg.len();
        let mut col = vec![BigRational::zero(); n];
        for row in &k {
            for (t, p) in row {
                col[*t] += p / BigRational::from_integer(BigInt::from(n));
            }
        }
        assert!(col.iter().all(|x| x == &rat(1, n as i64)));
        for row in &k {
            assert_eq!(row.iter().map(|x| x.1.clone()).sum::<BigRational>(), rat(1, 1));
        }
    }

    #[test]
    fn single_state_ratio_and_mixing_bound() {
        let g = c4();
        let mg = build_flip_metagraph(&g, &FlipConstraints::default()).unwrap();
        // a state none of whose flips is a self-loop has ratio d/(2d) = 1/2
        let s = (0..mg.len()).find(|&s| mg.moves[s].iter().all(|&t| t != s)).unwrap();
        assert_eq!(bottleneck_ratio(&mg, &[s]).unwrap(), rat(1, 2));
        assert_eq!(mixing_lower_bound(&rat(1, 8)).unwrap(), rat(2, 1));
    }

    #[test]
    fn apd_window() {
        assert!(within_apd(&[3, 5], &rat(1, 4)));
        assert!(!within_apd(&[2, 6], &rat(1, 4)));
        assert!(within_apd(&[0, 8], &rat(1, 1)));
    }

    #[test]
    fn acceptance_values() {
        assert_eq!(acceptance(&rat(1, 2), 1), rat(1, 2));
        assert_eq!(acceptance(&rat(1, 2), -2), rat(1, 1));
        assert_eq!(acceptance(&rat(3, 1), 2), rat(1, 1));
        assert_eq!(acceptance(&rat(3, 1), -1), rat(1, 3));
    }
}
