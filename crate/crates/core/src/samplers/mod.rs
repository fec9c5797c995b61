//! Exact samplers driven by marginal counts, and spanning-tree partition generators.

mod exact;
mod inductive;
mod trees;

pub use exact::{sample_balanced_uniform, sample_sc_nu_c, sample_sc_uniform, BalancedSampler, CycleSampler};
pub use inductive::{bernoulli, inductive_sample, EnumeratedOracle, MarginalOracle};
pub use trees::{random_mst, tree_partition, wilson_ust, CutRule, TreeKind, TreePartitionOptions};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SeededRng = ChaCha8Rng;

/// Deterministic generator for `seed`.
pub fn seeded_rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream `stream` derived from `seed`.
pub fn seeded_stream(seed: u64, stream: u64) -> SeededRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
