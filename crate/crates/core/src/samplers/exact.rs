//! Exact samplers for simple cycles and balanced 2-partitions of small-treewidth graphs.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

use super::inductive::{inductive_sample, ratio, MarginalOracle};
use crate::error::{Error, Result};
use crate::graph::{EdgeSet, MultiGraph};
use crate::partition::{comp, Partition};
use crate::spdp::{balanced_count_remainder, sc_marginal_mass};

fn split_prefix(m: usize, decided: &[bool]) -> (EdgeSet, EdgeSet) {
    let j = EdgeSet::from_ids(m, (0..decided.len()).filter(|&k| decided[k]));
    let j2 = EdgeSet::from_ids(m, (0..decided.len()).filter(|&k| !decided[k]));
    (j, j2)
}

/// Samples simple cycles C with probability ∝ Π_{e ∈ C} c(e), edges decided in id order.
#[derive(Clone, Debug)]
pub struct CycleSampler {
    g: MultiGraph,
    c: Vec<BigRational>,
    cache: HashMap<(EdgeSet, EdgeSet), BigRational>,
}

impl CycleSampler {
    pub fn new(g: &MultiGraph, c: Vec<BigRational>) -> Result<Self> {
        let mut s = CycleSampler { g: g.clone(), c, cache: HashMap::new() };
        let empty = g.empty_edge_set();
        if s.mass(&empty, &empty)?.is_zero() {
            return Err(Error::EmptySupport("graph has no simple cycle of positive weight".into()));
        }
        Ok(s)
    }

    pub fn uniform(g: &MultiGraph) -> Result<Self> {
        Self::new(g, vec![BigRational::one(); g.edge_count()])
    }

    /// N_c mass of cycles containing `j` and avoiding `j2`.
    pub fn mass(&mut self, j: &EdgeSet, j2: &EdgeSet) -> Result<BigRational> {
        if let Some(m) = self.cache.get(&(j.clone(), j2.clone())) {
            return Ok(m.clone());
        }
        let m = sc_marginal_mass(&self.g, &self.c, j, j2)?;
        self.cache.insert((j.clone(), j2.clone()), m.clone());
        Ok(m)
    }

    pub fn sample<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<EdgeSet> {
        let bits = inductive_sample(self, rng)?;
        Ok(EdgeSet::from_ids(bits.len(), (0..bits.len()).filter(|&e| bits[e])))
    }
}

impl MarginalOracle for CycleSampler {
    fn universe(&self) -> usize {
        self.g.edge_count()
    }

    fn query(&mut self, i: usize, decided: &[bool]) -> Result<BigRational> {
        let (mut j, j2) = split_prefix(self.g.edge_count(), decided);
        let den = self.mass(&j, &j2)?;
        if den.is_zero() {
            return Err(Error::EmptySupport("conditioning event has zero mass".into()));
        }
        j.insert(i);
        Ok(self.mass(&j, &j2)? / den)
    }
}

/// A uniformly random simple cycle of a graph of treewidth at most two.
pub fn sample_sc_uniform<R: Rng + ?Sized>(g: &MultiGraph, rng: &mut R) -> Result<EdgeSet> {
    CycleSampler::uniform(g)?.sample(rng)
}

/// A simple cycle drawn from ν_c.
pub fn sample_sc_nu_c<R: Rng + ?Sized>(g: &MultiGraph, c: &[BigRational], rng: &mut R) -> Result<EdgeSet> {
    CycleSampler::new(g, c.to_vec())?.sample(rng)
}

/// Uniform sampler over P₂⁰(G, w), deciding cut edges in id order from constrained counts.
#[derive(Clone, Debug)]
pub struct BalancedSampler {
    g: MultiGraph,
    w: Vec<u64>,
    /// Gadget depth for remainder extraction; `None` uses n² + 1.
    pub d: Option<u64>,
    cache: HashMap<(EdgeSet, EdgeSet), BigUint>,
}

impl BalancedSampler {
    pub fn new(g: &MultiGraph, w: &[u64]) -> Result<Self> {
        let mut s = BalancedSampler { g: g.clone(), w: w.to_vec(), d: None, cache: HashMap::new() };
        let empty = g.empty_edge_set();
        if s.count(&empty, &empty)?.is_zero() {
            return Err(Error::EmptySupport("no balanced connected 2-partition".into()));
        }
        Ok(s)
    }

    /// Number of balanced partitions whose cut contains `j` and avoids `j2`.
    pub fn count(&mut self, j: &EdgeSet, j2: &EdgeSet) -> Result<BigUint> {
        if let Some(m) = self.cache.get(&(j.clone(), j2.clone())) {
            return Ok(m.clone());
        }
        let m = balanced_count_remainder(&self.g, &self.w, j, j2, self.d)?;
        self.cache.insert((j.clone(), j2.clone()), m.clone());
        Ok(m)
    }

    pub fn sample<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<Partition> {
        let bits = inductive_sample(self, rng)?;
        let cut = EdgeSet::from_ids(bits.len(), (0..bits.len()).filter(|&e| bits[e]));
        let p = comp(&self.g, &cut);
        if p.k() != 2 {
            return Err(Error::Inadmissible(format!("sampled cut splits the graph into {} parts", p.k())));
        }
        Ok(p)
    }
}

impl MarginalOracle for BalancedSampler {
    fn universe(&self) -> usize {
        self.g.edge_count()
    }

    fn query(&mut self, i: usize, decided: &[bool]) -> Result<BigRational> {
        let (mut j, j2) = split_prefix(self.g.edge_count(), decided);
        let den = self.count(&j, &j2)?;
        j.insert(i);
        let num = self.count(&j, &j2)?;
        ratio(&num, &den)
    }
}

/// A uniformly random member of P₂⁰(G, w) for a series-parallel graph.
pub fn sample_balanced_uniform<R: Rng + ?Sized>(g: &MultiGraph, w: &[u64], rng: &mut R) -> Result<Partition> {
    BalancedSampler::new(g, w)?.sample(rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::is_in_e2;
    use crate::samplers::seeded_rng;

    #[test]
    fn bigon_has_one_cycle() {
        let g = MultiGraph::from_edges(2, &[(0, 1), (0, 1)]);
        let mut rng = seeded_rng(3);
        assert_eq!(sample_sc_uniform(&g, &mut rng).unwrap(), g.full_edge_set());
        let tree = MultiGraph::from_edges(3, &[(0, 1), (1, 2)]);
        assert!(sample_sc_uniform(&tree, &mut rng).is_err());
    }

    #[test]
    fn theta_samples_are_cycles() {
        let g = MultiGraph::from_edges(5, &[(0, 2), (2, 1), (0, 3), (3, 1), (0, 4), (4, 1)]);
        let mut s = CycleSampler::uniform(&g).unwrap();
        let mut rng = seeded_rng(4);
        for _ in 0..200 {
            let c = s.sample(&mut rng).unwrap();
            assert_eq!(c.count(), 4);
            assert!(is_in_e2(&g, &c));
        }
    }

    #[test]
    fn balanced_path_and_odd_weight() {
        let p4 = MultiGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]);
        let mut rng = seeded_rng(5);
        let p = sample_balanced_uniform(&p4, &[1, 1, 1, 1], &mut rng).unwrap();
        assert_eq!(p.assign(), &[0, 0, 1, 1]);
        assert!(sample_balanced_uniform(&p4, &[1, 1, 1, 2], &mut rng).is_err());
    }
}
