//! Brute-force enumeration and exact measurement used to validate every formula.

pub mod cycles;
pub mod measure;
pub mod metagraph;
pub mod partitions;

pub use cycles::{count_simple_paths, enum_simple_cycles, enum_simple_paths};
pub use measure::{n_lambda_mass, nu_lambda, tv_distance, tv_distance_f64};
pub use metagraph::{
    bottleneck_ratio, build_flip_metagraph, conductance_bound, exact_conductance, mixing_lower_bound,
    purification_structure, Conductance, FlipConstraints, MetaGraph, Purification,
};
pub use partitions::{enum_connected_partitions, EnumOptions};

/// Default guard on the number of edges for cycle enumeration.
pub const DEFAULT_EDGE_GUARD: usize = 30;
/// Default guard on the number of block assignments scanned.
pub const DEFAULT_STATE_GUARD: usize = 1 << 24;
