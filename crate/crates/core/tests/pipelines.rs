use connpart::flip::{ChainConfig, FlipChain};
use connpart::gadgets::{chain_of_dipoles, lift, pi_dipoles};
use connpart::generators::{gate_graph, grid, initial_partition, random_sp_graph, shaved_grid, GraphFile, InitialSplit};
use connpart::oracle::{enum_connected_partitions, enum_simple_cycles, EnumOptions};
use connpart::partition::{cut, is_connected_partition, rat};
use connpart::samplers::{seeded_rng, BalancedSampler, CycleSampler};
use connpart::spdp::{count_balanced, count_sc};
use connpart::MultiGraph;
use num_bigint::BigUint;

#[test]
fn a_reloaded_embedding_dualizes_like_the_original() {
    let (pg, layout) = shaved_grid(4).unwrap();
    let text = GraphFile::from_plane(&pg).with_layout(&layout).to_json().unwrap();
    let loaded = GraphFile::from_json(&text).unwrap().to_graph().unwrap();
    let plane = loaded.require_plane().unwrap();
    let (dual, _) = plane.dual().unwrap();
    let (orig_dual, _) = pg.dual().unwrap();
    assert!(dual.same_embedding(&orig_dual));
    let parts = enum_connected_partitions(plane.graph(), 2, &EnumOptions::unordered(false)).unwrap();
    assert_eq!(parts.len(), enum_simple_cycles(dual.graph(), usize::MAX).unwrap().len());
}

#[test]
fn sampled_cycles_are_cycles_and_cover_the_support() {
    let mut rng = seeded_rng(11);
    let g = random_sp_graph(9, &mut rng);
    let total = count_sc(&g).unwrap();
    let support = enum_simple_cycles(&g, usize::MAX).unwrap();
    assert_eq!(total, BigUint::from(support.len()));
    let mut sampler = CycleSampler::uniform(&g).unwrap();
    let mut seen = vec![false; support.len()];
    for _ in 0..2000 {
        let c = sampler.sample(&mut rng).unwrap();
        let i = support.iter().position(|s| *s == c).expect("draw is a simple cycle");
        seen[i] = true;
    }
    assert!(seen.iter().all(|&s| s), "every cycle is drawn at least once");
}

#[test]
fn balanced_draws_are_balanced_connected_partitions() {
    let (pg, _) = grid(2, 4).unwrap();
    let g = pg.graph();
    let w = vec![1u64; g.node_count()];
    let mut sampler = BalancedSampler::new(g, &w).unwrap();
    let mut rng = seeded_rng(5);
    for _ in 0..200 {
        let p = sampler.sample(&mut rng).unwrap();
        assert!(is_connected_partition(g, &p));
        assert_eq!(p.block_sizes(), vec![4, 4]);
    }
    let ladder = MultiGraph::from_edges(6, &[(0, 1), (1, 2), (3, 4), (4, 5), (0, 3), (1, 4), (2, 5)]);
    assert_eq!(count_balanced(&ladder, None).unwrap(), BigUint::from(3u32));
}

#[test]
fn lifted_cycles_project_back() {
    let (pg, _) = grid(3, 3).unwrap();
    let g = pg.graph();
    let m = chain_of_dipoles(g, 3, 2).unwrap();
    let cycles = enum_simple_cycles(g, usize::MAX).unwrap();
    assert_eq!(cycles.len(), 13);
    for y in &cycles {
        let (x, count) = lift(&m, y).unwrap();
        assert_eq!(pi_dipoles(&m, &x), *y);
        assert_eq!(count, num_traits::pow(BigUint::from(3u32), 2 * y.count()));
    }
    let p = initial_partition(&grid(3, 3).unwrap().1, InitialSplit::Horizontal);
    assert!(lift(&m, &cut(g, &p)).is_err());
}

#[test]
fn the_walk_on_a_gate_graph_respects_population_bounds() {
    let (g, layout) = gate_graph(1, false).unwrap();
    let start = initial_partition(&layout, InitialSplit::Horizontal);
    let cfg = ChainConfig { lambda: rat(1, 2), apd_percent: Some(rat(5, 1)), seed: 4, validate_every: 5_000, ..Default::default() };
    let mut chain = FlipChain::new(&g, cfg, start).unwrap();
    let n = g.node_count() as u64;
    let mut within = true;
    chain
        .run_observed(50_000, |_, s| {
            within &= s.block_weights.iter().all(|&w| 2 * w * 100 >= n * 95 && 2 * w * 100 <= n * 105);
        })
        .unwrap();
    assert!(within);
    assert!(chain.stats().accepted > 0);
}
