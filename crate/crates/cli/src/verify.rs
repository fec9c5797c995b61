//! Oracle-equivalence batteries behind the `verify` subcommand.

use connpart::gadgets::{build_rd, sbl_count_rd, sc_count_rd};
use connpart::generators::{random_plane_graph, random_sp_graph, shaved_grid};
use connpart::graph::is_in_e2;
use connpart::oracle::metagraph::{build_flip_metagraph, FlipConstraints};
use connpart::oracle::{count_simple_paths, enum_connected_partitions, enum_simple_cycles, EnumOptions};
use connpart::partition::{cut, is_eps_balanced, rat};
use connpart::samplers::seeded_stream;
use connpart::spdp::{count_balanced, count_sc};
use connpart::PlaneGraph;
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Level {
    Quick,
    Full,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub checks: usize,
    pub failures: usize,
    pub detail: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub level: String,
    pub passed: bool,
    pub results: Vec<CheckResult>,
}

struct Check {
    name: &'static str,
    checks: usize,
    detail: Vec<String>,
}

impl Check {
    fn new(name: &'static str) -> Self {
        Check { name, checks: 0, detail: Vec::new() }
    }

    fn expect(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.detail.push(what());
        }
    }

    fn finish(self) -> CheckResult {
        CheckResult {
            name: self.name.into(),
            passed: self.detail.is_empty(),
            checks: self.checks,
            failures: self.detail.len(),
            detail: self.detail,
        }
    }
}

fn rd_formulas(max_d: usize) -> CheckResult {
    let mut c = Check::new("rd-counting-formulas");
    for d in 0..=max_d {
        match build_rd(d) {
            Ok(rd) => {
                let cycles = enum_simple_cycles(rd.graph(), usize::MAX).map(|v| v.len());
                let sc = cycles.map(BigUint::from).ok();
                c.expect(sc.as_ref() == Some(&sc_count_rd(d)), || format!("d={d}: |SC| = {sc:?}, formula {}", sc_count_rd(d)));
                let [a, b, _] = rd.terminals;
                let bl = BigUint::from(count_simple_paths(rd.graph(), a, b, None));
                c.expect(bl == sbl_count_rd(d), || format!("d={d}: |SBL| = {bl}, formula {}", sbl_count_rd(d)));
            }
            Err(e) => c.expect(false, || format!("d={d}: {e}")),
        }
    }
    c.finish()
}

fn duality_check(c: &mut Check, label: &str, pg: &PlaneGraph) {
    let partitions = enum_connected_partitions(pg.graph(), 2, &EnumOptions::unordered(false));
    match (partitions, pg.dual()) {
        (Ok(parts), Ok((dual, map))) => {
            let cycles = enum_simple_cycles(dual.graph(), usize::MAX).unwrap_or_default();
            c.expect(parts.len() == cycles.len(), || format!("{label}: |P2| = {} but |SC(G*)| = {}", parts.len(), cycles.len()));
            let all_cycles = parts.iter().all(|p| {
                let cu = cut(pg.graph(), p);
                let image = connpart::EdgeSet::from_ids(dual.graph().edge_count(), cu.iter().map(|e| map[e]));
                is_in_e2(dual.graph(), &image)
            });
            c.expect(all_cycles, || format!("{label}: a cut does not map to a dual simple cycle"));
            match dual.dual() {
                Ok((back, _)) => c.expect(back.same_embedding(pg), || format!("{label}: double dual differs")),
                Err(e) => c.expect(false, || format!("{label}: {e}")),
            }
        }
        (Err(e), _) | (_, Err(e)) => c.expect(false, || format!("{label}: {e}")),
    }
}

fn duality(count: usize, seed: u64) -> CheckResult {
    let mut c = Check::new("plane-duality");
    let mut rng = seeded_stream(seed, 1);
    for i in 0..count {
        let n = rng.gen_range(3..=9);
        match random_plane_graph(n, 0.6, &mut rng) {
            Ok((pg, _)) => duality_check(&mut c, &format!("random #{i}"), &pg),
            Err(e) => c.expect(false, || format!("random #{i}: {e}")),
        }
    }
    for n in 3..=5 {
        if let Ok((pg, _)) = shaved_grid(n) {
            duality_check(&mut c, &format!("shaved_grid({n})"), &pg);
        }
    }
    c.finish()
}

fn sp_counts(count: usize, seed: u64) -> CheckResult {
    let mut c = Check::new("sp-cycle-counts");
    let mut rng = seeded_stream(seed, 2);
    for i in 0..count {
        let m = rng.gen_range(1..=14);
        let g = random_sp_graph(m, &mut rng);
        let brute = enum_simple_cycles(&g, usize::MAX).map(|v| BigUint::from(v.len()));
        let dp = count_sc(&g);
        c.expect(matches!((&brute, &dp), (Ok(a), Ok(b)) if a == b), || format!("graph #{i} ({m} edges): {brute:?} vs {dp:?}"));
    }
    c.finish()
}

fn balanced_counts(count: usize, seed: u64) -> CheckResult {
    let mut c = Check::new("balanced-counts");
    let mut rng = seeded_stream(seed, 3);
    for i in 0..count {
        let m = rng.gen_range(2..=10);
        let g = random_sp_graph(m, &mut rng);
        let w: Vec<u64> = (0..g.node_count()).map(|_| rng.gen_range(0..=6)).collect();
        let opts = EnumOptions { weights: Some(w.clone()), eps: Some(BigRational::zero()), ..EnumOptions::unordered(false) };
        let brute = enum_connected_partitions(&g, 2, &opts).map(|v| {
            v.iter().filter(|p| is_eps_balanced(p, &BigRational::zero(), Some(&w)).unwrap_or(false)).count()
        });
        let dp = count_balanced(&g, Some(&w));
        c.expect(matches!((&brute, &dp), (Ok(a), Ok(b)) if BigUint::from(*a) == *b), || {
            format!("graph #{i} weights {w:?}: {brute:?} vs {dp:?}")
        });
    }
    c.finish()
}

fn detailed_balance() -> CheckResult {
    let mut c = Check::new("flip-detailed-balance");
    let graphs = [
        connpart::MultiGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]),
        connpart::generators::grid(3, 3).map(|(pg, _)| pg.graph().clone()).expect("grid"),
    ];
    for (gi, g) in graphs.iter().enumerate() {
        let Ok(mg) = build_flip_metagraph(g, &FlipConstraints { allow_empty: false, ..Default::default() }) else {
            c.expect(false, || format!("graph #{gi}: meta-graph failed"));
            continue;
        };
        for lambda in [rat(1, 2), rat(1, 1), rat(3, 1)] {
            let kernel = mg.kernel(g, &lambda, &rat(1, 2));
            let cuts = mg.cut_sizes(g);
            let pi = |s: usize| num_traits::pow(lambda.clone(), cuts[s]);
            let mut ok = true;
            for (s, row) in kernel.iter().enumerate() {
                let total: BigRational = row.iter().map(|e| e.1.clone()).sum();
                ok &= total == BigRational::one();
                for (t, p) in row {
                    let back = kernel[*t].iter().find(|e| e.0 == s).map(|e| e.1.clone()).unwrap_or_default();
                    ok &= pi(s) * p == pi(*t) * back;
                }
            }
            c.expect(ok, || format!("graph #{gi}, lambda {lambda}: kernel not reversible"));
        }
    }
    c.finish()
}

/// Run every battery. `Quick` uses smaller sample counts.
pub fn verify_suite(level: Level, seed: u64) -> Report {
    let (rd, n) = match level {
        Level::Quick => (3, 20),
        Level::Full => (3, 60),
    };
    let results = vec![rd_formulas(rd), duality(n, seed), sp_counts(n * 2, seed), balanced_counts(n, seed), detailed_balance()];
    Report {
        level: format!("{level:?}").to_lowercase(),
        passed: results.iter().all(|r| r.passed),
        results,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_batteries_pass() {
        assert!(rd_formulas(1).passed);
        assert!(duality(3, 1).passed);
        assert!(sp_counts(5, 1).passed);
        assert!(balanced_counts(5, 1).passed);
    }
}
