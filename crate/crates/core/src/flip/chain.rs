//! The lazy Metropolis flip walk on connected k-partitions.

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{MultiGraph, NodeId};
use crate::partition::{cut, Partition};
use crate::samplers::seeded_rng;

#[derive(Clone, Debug, PartialEq)]
pub struct ChainConfig {
    pub lambda: BigRational,
    /// Allowed population deviation in percent of the ideal block weight.
    pub apd_percent: Option<BigRational>,
    pub steps: u64,
    pub seed: u64,
    pub laziness: f64,
    pub k: usize,
    pub allow_empty_blocks: bool,
    /// Record the cut size every `trace_stride` steps (0 disables the trace).
    pub trace_stride: u64,
    /// Recompute caches from scratch every this many steps (0 disables).
    pub validate_every: u64,
}

impl Default for ChainConfig {
    fn default() -> Self {
        ChainConfig {
            lambda: BigRational::from_integer(1.into()),
            apd_percent: None,
            steps: 0,
            seed: 0,
            laziness: 0.5,
            k: 2,
            allow_empty_blocks: false,
            trace_stride: 0,
            validate_every: 1_000_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainState {
    pub partition: Partition,
    pub cut_size: usize,
    pub block_weights: Vec<u64>,
    pub block_sizes: Vec<usize>,
}

impl ChainState {
    pub fn new(g: &MultiGraph, p: Partition) -> Self {
        ChainState {
            cut_size: cut(g, &p).count(),
            block_weights: p.block_weights(g),
            block_sizes: p.block_sizes(),
            partition: p,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlipStats {
    pub steps: u64,
    pub accepted: u64,
    pub self_loops: u64,
    pub rejected: u64,
    pub flips: Vec<u64>,
    /// `occupancy[v * k + b]` = number of steps node v spent in block b.
    pub occupancy: Vec<u64>,
    /// Number of steps each edge spent in the cut.
    pub edge_cut: Vec<u64>,
    pub cut_trace: Vec<usize>,
    pub k: usize,
}

impl FlipStats {
    pub fn occupancy_of(&self, v: NodeId, b: usize) -> u64 {
        self.occupancy[v * self.k + b]
    }

    /// Mean cut size over the recorded trace.
    pub fn mean_cut(&self) -> Option<f64> {
        (!self.cut_trace.is_empty()).then(|| self.cut_trace.iter().sum::<usize>() as f64 / self.cut_trace.len() as f64)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Proposal {
    Hold,
    /// The flip of `v` would leave the state space.
    SelfLoop(NodeId),
    Move { v: NodeId, from: usize, to: usize, delta_cut: i64 },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Checkpoint {
    pub assign: Vec<usize>,
    pub k: usize,
    pub step: u64,
    pub seed: u64,
    pub word_pos: u128,
    pub stream: u64,
    pub stats: FlipStats,
    pub last_node_change: Vec<u64>,
    pub last_edge_change: Vec<u64>,
}

/// A running chain with its caches, statistics and random stream.
pub struct FlipChain<'g> {
    g: &'g MultiGraph,
    cfg: ChainConfig,
    state: ChainState,
    stats: FlipStats,
    rng: ChaCha8Rng,
    step: u64,
    accept_table: Vec<f64>,
    max_deg: usize,
    apd_window: Option<(i128, i128, i128)>,
    stamp: Vec<u64>,
    stamp_id: u64,
    queue: Vec<NodeId>,
    last_node_change: Vec<u64>,
    last_edge_change: Vec<u64>,
}

fn check_config(cfg: &ChainConfig) -> Result<()> {
    if !cfg.lambda.is_positive() {
        return Err(Error::InvalidInput("lambda must be positive".into()));
    }
    if !(0.0..1.0).contains(&cfg.laziness) {
        return Err(Error::InvalidInput("laziness must lie in [0, 1)".into()));
    }
    if cfg.k < 2 {
        return Err(Error::InvalidInput("flip walk needs k ≥ 2".into()));
    }
    if cfg.apd_percent.as_ref().is_some_and(|x| x.is_negative()) {
        return Err(Error::InvalidInput("apd must be nonnegative".into()));
    }
    Ok(())
}

impl<'g> FlipChain<'g> {
    pub fn new(g: &'g MultiGraph, cfg: ChainConfig, initial: Partition) -> Result<Self> {
        check_config(&cfg)?;
        if initial.node_count() != g.node_count() || initial.k() != cfg.k {
            return Err(Error::Inadmissible("initial partition does not match the graph and k".into()));
        }
        let n = g.node_count();
        let max_deg = (0..n).map(|v| g.degree(v)).max().unwrap_or(0);
        let lambda = cfg.lambda.to_f64().expect("finite lambda");
        let accept_table = (0..=2 * max_deg).map(|i| lambda.powi(i as i32 - max_deg as i32).min(1.0)).collect();
        let apd_window = cfg.apd_percent.as_ref().map(|x| {
            let x = x / BigRational::from_integer(100.into());
            let (p, q) = (x.numer().to_i128().expect("apd numerator"), x.denom().to_i128().expect("apd denominator"));
            let total = g.total_weight() as i128;
            (total * (q - p), total * (q + p), q)
        });
        let state = ChainState::new(g, initial);
        let stats = FlipStats {
            flips: vec![0; n],
            occupancy: vec![0; n * cfg.k],
            edge_cut: vec![0; g.edge_count()],
            k: cfg.k,
            ..Default::default()
        };
        let chain = FlipChain {
            g,
            rng: seeded_rng(cfg.seed),
            cfg,
            state,
            stats,
            step: 0,
            accept_table,
            max_deg,
            apd_window,
            stamp: vec![0; n],
            stamp_id: 0,
            queue: Vec::with_capacity(n),
            last_node_change: vec![0; n],
            last_edge_change: vec![0; g.edge_count()],
        };
        chain.validate()?;
        Ok(chain)
    }

    /// Resume from a checkpoint written by [`FlipChain::checkpoint`].
    pub fn resume(g: &'g MultiGraph, cfg: ChainConfig, cp: &Checkpoint) -> Result<Self> {
        let mut chain = Self::new(g, cfg, Partition::from_assign(cp.k, cp.assign.clone()))?;
        chain.step = cp.step;
        chain.stats = cp.stats.clone();
        chain.last_node_change = cp.last_node_change.clone();
        chain.last_edge_change = cp.last_edge_change.clone();
        chain.rng.set_stream(cp.stream);
        chain.rng.set_word_pos(cp.word_pos);
        Ok(chain)
    }

    pub fn checkpoint(&self) -> Checkpoint {
        Checkpoint {
            assign: self.state.partition.assign().to_vec(),
            k: self.cfg.k,
            step: self.step,
            seed: self.cfg.seed,
            word_pos: self.rng.get_word_pos(),
            stream: self.rng.get_stream(),
            stats: self.stats.clone(),
            last_node_change: self.last_node_change.clone(),
            last_edge_change: self.last_edge_change.clone(),
        }
    }

    /// Move the chain to `p` without touching statistics or the random stream.
    pub fn set_state(&mut self, p: Partition) -> Result<()> {
        if p.node_count() != self.g.node_count() || p.k() != self.cfg.k {
            return Err(Error::Inadmissible("partition does not match the graph and k".into()));
        }
        let t = self.step;
        let k = self.cfg.k;
        let assign = self.state.partition.assign();
        for v in 0..self.g.node_count() {
            self.stats.occupancy[v * k + assign[v]] += t - self.last_node_change[v];
            self.last_node_change[v] = t;
        }
        for (e, &(a, b)) in self.g.edges().iter().enumerate() {
            if assign[a] != assign[b] {
                self.stats.edge_cut[e] += t - self.last_edge_change[e];
            }
            self.last_edge_change[e] = t;
        }
        self.state = ChainState::new(self.g, p);
        self.validate()
    }

    pub fn state(&self) -> &ChainState {
        &self.state
    }

    pub fn step_count(&self) -> u64 {
        self.step
    }

    fn admissible_weights(&self, w: u64) -> bool {
        match self.apd_window {
            None => true,
            Some((lo, hi, q)) => {
                let kw = self.cfg.k as i128 * w as i128 * q;
                lo <= kw && kw <= hi
            }
        }
    }

    /// Whether block `b` minus `v` (which lies in `b`) stays connected.
    fn connected_without(&mut self, b: usize, v: NodeId) -> bool {
        let assign = self.state.partition.assign();
        let remaining = self.state.block_sizes[b] - 1;
        if remaining == 0 {
            return true;
        }
        let mut targets = 0usize;
        let mut start = None;
        self.stamp_id += 2;
        let (seen, target) = (self.stamp_id, self.stamp_id + 1);
        for &(_, u) in self.g.incident(v) {
            if u != v && assign[u] == b && self.stamp[u] != target {
                self.stamp[u] = target;
                targets += 1;
                start.get_or_insert(u);
            }
        }
        let Some(start) = start else { return false };
        self.queue.clear();
        self.queue.push(start);
        self.stamp[start] = seen;
        targets -= 1;
        let mut visited = 1usize;
        let mut head = 0;
        while head < self.queue.len() {
            if targets == 0 {
                return true;
            }
            let x = self.queue[head];
            head += 1;
            for &(_, u) in self.g.incident(x) {
                if u == v || assign[u] != b || self.stamp[u] == seen {
                    continue;
                }
                if self.stamp[u] == target {
                    targets -= 1;
                }
                self.stamp[u] = seen;
                visited += 1;
                self.queue.push(u);
            }
        }
        targets == 0 || visited == remaining
    }

    fn target_block(&mut self, v: NodeId, from: usize) -> usize {
        if self.cfg.k == 2 {
            return 1 - from;
        }
        let assign = self.state.partition.assign();
        let mut opts: Vec<usize> = self.g.incident(v).iter().map(|&(_, u)| assign[u]).filter(|&b| b != from).collect();
        if self.cfg.allow_empty_blocks {
            opts.extend((0..self.cfg.k).filter(|&b| self.state.block_sizes[b] == 0));
        }
        opts.sort_unstable();
        opts.dedup();
        if opts.is_empty() {
            return from;
        }
        opts[self.rng.gen_range(0..opts.len())]
    }

    /// Draw one proposal from the current state.
    pub fn propose(&mut self) -> Proposal {
        if self.rng.gen::<f64>() < self.cfg.laziness {
            return Proposal::Hold;
        }
        let v = self.rng.gen_range(0..self.g.node_count());
        let from = self.state.partition.block_of(v);
        let to = self.target_block(v, from);
        if to == from {
            return Proposal::SelfLoop(v);
        }
        let assign = self.state.partition.assign();
        let (mut into_from, mut into_to) = (0i64, 0i64);
        for &(_, u) in self.g.incident(v) {
            if u == v {
                continue;
            }
            if assign[u] == from {
                into_from += 1;
            } else if assign[u] == to {
                into_to += 1;
            }
        }
        let target_ok = into_to > 0 || (self.state.block_sizes[to] == 0 && self.cfg.allow_empty_blocks);
        let source_ok = self.state.block_sizes[from] > 1 || self.cfg.allow_empty_blocks;
        let wv = self.g.weight(v);
        let apd_ok = self.admissible_weights(self.state.block_weights[from] - wv)
            && self.admissible_weights(self.state.block_weights[to] + wv);
        if !(target_ok && source_ok && apd_ok) || !self.connected_without(from, v) {
            return Proposal::SelfLoop(v);
        }
        Proposal::Move { v, from, to, delta_cut: into_from - into_to }
    }

    /// Metropolis acceptance of an admissible move with probability min(1, λ^{Δcut}).
    pub fn accept(&mut self, p: Proposal) -> bool {
        let Proposal::Move { v, from, to, delta_cut } = p else { return false };
        let a = self.accept_table[(delta_cut + self.max_deg as i64) as usize];
        if a < 1.0 && self.rng.gen::<f64>() >= a {
            return false;
        }
        self.apply(v, from, to, delta_cut);
        true
    }

    fn apply(&mut self, v: NodeId, from: usize, to: usize, delta_cut: i64) {
        let t = self.step;
        let k = self.cfg.k;
        self.stats.occupancy[v * k + from] += t - self.last_node_change[v];
        self.last_node_change[v] = t;
        let assign = self.state.partition.assign();
        for &(e, u) in self.g.incident(v) {
            if u == v {
                continue;
            }
            if assign[u] != from {
                self.stats.edge_cut[e] += t - self.last_edge_change[e];
            }
            self.last_edge_change[e] = t;
        }
        self.state.partition.set(v, to);
        self.state.cut_size = (self.state.cut_size as i64 + delta_cut) as usize;
        let wv = self.g.weight(v);
        self.state.block_weights[from] -= wv;
        self.state.block_weights[to] += wv;
        self.state.block_sizes[from] -= 1;
        self.state.block_sizes[to] += 1;
        self.stats.flips[v] += 1;
    }

    /// One full step: propose, accept or reject, record statistics.
    pub fn step_once(&mut self) -> Result<()> {
        let p = self.propose();
        match p {
            Proposal::Hold => {}
            Proposal::SelfLoop(_) => self.stats.self_loops += 1,
            Proposal::Move { .. } => {
                if self.accept(p) {
                    self.stats.accepted += 1;
                } else {
                    self.stats.rejected += 1;
                }
            }
        }
        self.step += 1;
        self.stats.steps = self.step;
        if self.cfg.trace_stride > 0 && self.step.is_multiple_of(self.cfg.trace_stride) {
            self.stats.cut_trace.push(self.state.cut_size);
        }
        if self.cfg.validate_every > 0 && self.step.is_multiple_of(self.cfg.validate_every) {
            self.validate()?;
        }
        Ok(())
    }

    /// Recompute every cache from scratch and check the state constraints.
    pub fn validate(&self) -> Result<()> {
        let fresh = ChainState::new(self.g, self.state.partition.clone());
        if fresh != self.state {
            return Err(Error::Inadmissible(format!("cache mismatch at step {}", self.step)));
        }
        for b in 0..self.cfg.k {
            let members = self.state.partition.members(b);
            if self.state.block_sizes[b] == 0 {
                if !self.cfg.allow_empty_blocks {
                    return Err(Error::Inadmissible(format!("block {b} is empty")));
                }
                continue;
            }
            if !self.g.induces_connected(&members) {
                return Err(Error::Inadmissible(format!("block {b} is disconnected at step {}", self.step)));
            }
            if !self.admissible_weights(self.state.block_weights[b]) {
                return Err(Error::Inadmissible(format!("block {b} violates the population window")));
            }
        }
        Ok(())
    }

    /// Statistics with the lazily accumulated occupancy and cut counts brought up to date.
    pub fn stats(&self) -> FlipStats {
        let mut s = self.stats.clone();
        let t = self.step;
        let k = self.cfg.k;
        let assign = self.state.partition.assign();
        for v in 0..self.g.node_count() {
            s.occupancy[v * k + assign[v]] += t - self.last_node_change[v];
        }
        for (e, &(a, b)) in self.g.edges().iter().enumerate() {
            if assign[a] != assign[b] {
                s.edge_cut[e] += t - self.last_edge_change[e];
            }
        }
        s
    }

    pub fn run(&mut self, steps: u64) -> Result<()> {
        for _ in 0..steps {
            self.step_once()?;
        }
        Ok(())
    }

    /// Run while calling `observe` after every step.
    pub fn run_observed(&mut self, steps: u64, mut observe: impl FnMut(u64, &ChainState)) -> Result<()> {
        for _ in 0..steps {
            self.step_once()?;
            observe(self.step, &self.state);
        }
        Ok(())
    }
}

/// Run `cfg.steps` steps from `initial`.
pub fn run_chain(g: &MultiGraph, cfg: &ChainConfig, initial: Partition) -> Result<(ChainState, FlipStats)> {
    let mut chain = FlipChain::new(g, cfg.clone(), initial)?;
    chain.run(cfg.steps)?;
    chain.validate()?;
    Ok((chain.state().clone(), chain.stats()))
}

/// One proposal from `state` under `cfg`, using `rng` for the randomness.
pub fn flip_propose(g: &MultiGraph, cfg: &ChainConfig, state: &Partition, rng: &mut ChaCha8Rng) -> Result<Proposal> {
    let mut chain = FlipChain::new(g, cfg.clone(), state.clone())?;
    std::mem::swap(&mut chain.rng, rng);
    let p = chain.propose();
    std::mem::swap(&mut chain.rng, rng);
    Ok(p)
}

/// Apply the Metropolis rule to `proposal`, returning the next state.
pub fn metropolis_accept(
    g: &MultiGraph,
    cfg: &ChainConfig,
    state: &Partition,
    proposal: Proposal,
    rng: &mut ChaCha8Rng,
) -> Result<ChainState> {
    let mut chain = FlipChain::new(g, cfg.clone(), state.clone())?;
    std::mem::swap(&mut chain.rng, rng);
    chain.accept(proposal);
    std::mem::swap(&mut chain.rng, rng);
    Ok(chain.state().clone())
}

/// Exact acceptance probability min(1, λ^δ).
pub fn acceptance_probability(lambda: &BigRational, delta: i64) -> Result<BigRational> {
    if !lambda.is_positive() {
        return Err(Error::InvalidInput("lambda must be positive".into()));
    }
    Ok(crate::oracle::metagraph::acceptance(lambda, delta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::metagraph::{build_flip_metagraph, FlipConstraints};
    use crate::partition::rat;

    fn cycle(n: usize) -> MultiGraph {
        MultiGraph::from_edges(n, &(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>())
    }

    fn cfg(lambda: BigRational, steps: u64, seed: u64) -> ChainConfig {
        ChainConfig { lambda, steps, seed, ..Default::default() }
    }

    #[test]
    fn zero_steps_returns_initial() {
        let g = cycle(6);
        let p = Partition::from_assign(2, vec![0, 0, 0, 1, 1, 1]);
        let (s, stats) = run_chain(&g, &cfg(rat(1, 1), 0, 1), p.clone()).unwrap();
        assert_eq!(s.partition, p);
        assert_eq!(s.cut_size, 2);
        assert!(stats.flips.iter().chain(&stats.occupancy).chain(&stats.edge_cut).all(|&x| x == 0));
    }

    #[test]
    fn rejects_bad_inputs() {
        let g = cycle(4);
        let disc = Partition::from_assign(2, vec![0, 1, 0, 1]);
        assert!(run_chain(&g, &cfg(rat(1, 1), 1, 1), disc).is_err());
        let p = Partition::from_assign(2, vec![0, 0, 1, 1]);
        assert!(run_chain(&g, &cfg(rat(0, 1), 1, 1), p.clone()).is_err());
        assert!(run_chain(&g, &cfg(rat(-1, 2), 1, 1), p).is_err());
    }

    #[test]
    fn proposals_and_acceptance() {
        let path = MultiGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]);
        let p = Partition::from_assign(2, vec![0, 0, 0, 1]);
        let c = ChainConfig { laziness: 0.0, ..cfg(rat(1, 1), 0, 3) };
        let mut chain = FlipChain::new(&path, c, p).unwrap();
        let mut seen = std::collections::BTreeSet::new();
        for _ in 0..400 {
            match chain.propose() {
                Proposal::SelfLoop(v) => assert!(v == 0 || v == 1 || v == 3, "{v}"),
                Proposal::Move { v, delta_cut, .. } => {
                    assert_eq!((v, delta_cut), (2, 0));
                    seen.insert(v);
                }
                Proposal::Hold => panic!("laziness is zero"),
            }
        }
        assert_eq!(seen.len(), 1);
        assert_eq!(acceptance_probability(&rat(1, 2), 1).unwrap(), rat(1, 2));
        assert_eq!(acceptance_probability(&rat(1, 1), 3).unwrap(), rat(1, 1));
        assert!(acceptance_probability(&rat(0, 1), 1).is_err());
    }

    #[test]
    fn metropolis_rates() {
        let g = cycle(6);
        let p = Partition::from_assign(2, vec![0, 0, 0, 1, 1, 1]);
        let mv = Proposal::Move { v: 2, from: 0, to: 1, delta_cut: 0 };
        let mut rng = seeded_rng(4);
        for _ in 0..20 {
            let s = metropolis_accept(&g, &cfg(rat(1, 1), 0, 0), &p, mv, &mut rng).unwrap();
            assert_eq!(s.partition.assign(), &[0, 0, 1, 1, 1, 1]);
        }
        let grid = MultiGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]);
        let q = Partition::from_assign(2, vec![0, 0, 0, 1]);
        let up = Proposal::Move { v: 1, from: 0, to: 1, delta_cut: 1 };
        let trials = 20000;
        let hits = (0..trials)
            .filter(|_| metropolis_accept(&grid, &cfg(rat(1, 2), 0, 0), &q, up, &mut rng).unwrap().partition != q)
            .count();
        let f = hits as f64 / trials as f64;
        assert!((f - 0.5).abs() < 4.0 * (0.25 / trials as f64).sqrt(), "{f}");
    }

    #[test]
    fn deterministic_and_coherent() {
        let g = cycle(10);
        let p = Partition::from_assign(2, (0..10).map(|i| usize::from(i >= 5)).collect());
        let c = ChainConfig { validate_every: 97, trace_stride: 10, ..cfg(rat(2, 3), 5000, 11) };
        let a = run_chain(&g, &c, p.clone()).unwrap();
        let b = run_chain(&g, &c, p).unwrap();
        assert_eq!(a, b);
        let stats = a.1;
        assert_eq!(stats.cut_trace.len(), 500);
        assert!(stats.flips.iter().sum::<u64>() <= stats.accepted);
        for v in 0..10 {
            assert_eq!(stats.occupancy_of(v, 0) + stats.occupancy_of(v, 1), 5000);
        }
        assert_eq!(stats.edge_cut.iter().sum::<u64>() % 2, 0);
    }

    #[test]
    fn checkpoint_resume_matches_straight_run() {
        let g = cycle(8);
        let p = Partition::from_assign(2, vec![0, 0, 0, 0, 1, 1, 1, 1]);
        let c = cfg(rat(1, 2), 0, 21);
        let mut straight = FlipChain::new(&g, c.clone(), p.clone()).unwrap();
        straight.run(3000).unwrap();
        let mut first = FlipChain::new(&g, c.clone(), p).unwrap();
        first.run(1200).unwrap();
        let json = serde_json::to_string(&first.checkpoint()).unwrap();
        let mut resumed = FlipChain::resume(&g, c, &serde_json::from_str(&json).unwrap()).unwrap();
        resumed.run(1800).unwrap();
        assert_eq!(resumed.state(), straight.state());
        assert_eq!(resumed.stats(), straight.stats());
    }

    #[test]
    fn apd_window_is_respected() {
        let g = cycle(8);
        let p = Partition::from_assign(2, vec![0, 0, 0, 0, 1, 1, 1, 1]);
        let c = ChainConfig { apd_percent: Some(rat(25, 1)), validate_every: 1, ..cfg(rat(1, 1), 2000, 5) };
        let mut chain = FlipChain::new(&g, c, p).unwrap();
        chain.run_observed(2000, |_, s| assert!(s.block_sizes.iter().all(|&b| (3..=5).contains(&b)))).unwrap();
    }

    #[test]
    fn c4_kernel_matches_exact() {
        let g = cycle(4);
        let lambda = rat(1, 2);
        let mg = build_flip_metagraph(&g, &FlipConstraints { allow_empty: false, ..Default::default() }).unwrap();
        let exact = mg.kernel(&g, &lambda, &rat(1, 2));
        let reps = 20000u64;
        let mut chain = FlipChain::new(&g, cfg(lambda, 0, 99), mg.states[0].clone()).unwrap();
        for (s, row) in exact.iter().enumerate() {
            let mut counts = vec![0u64; mg.len()];
            for _ in 0..reps {
                chain.set_state(mg.states[s].clone()).unwrap();
                chain.step_once().unwrap();
                counts[mg.index_of(&chain.state().partition).unwrap()] += 1;
            }
            for t in 0..mg.len() {
                let p = row.iter().find(|e| e.0 == t).map_or(0.0, |e| e.1.to_f64().unwrap());
                let f = counts[t] as f64 / reps as f64;
                let se = (p * (1.0 - p) / reps as f64).sqrt().max(1e-9);
                assert!((f - p).abs() <= 4.0 * se, "row {s} col {t}: {f} vs {p}");
            }
        }
    }
}
