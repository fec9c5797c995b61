//! Series-parallel recognition and exact dynamic programs on SP-trees.

pub mod balanced;
pub mod poly;
pub mod remainder;
pub mod sptree;
pub mod tw2;

pub use balanced::{count_balanced, leaf_table, parallel_table, series_table, table_x, DPTableX, MonoidWeight};
pub use poly::{Semiring, UniPoly};
pub use remainder::{balanced_count_remainder, default_d_balanced, default_d_cycles, sc_count_remainder};
pub use sptree::{recognize_sp, recognize_sp_any, SPTree, SpKind, SpNode};
pub use tw2::{biconnected_blocks, count_sc, eval_fsc_fsp, fsc_tw2, sc_marginal_mass, tw2_embedding, Tw2Embedding};
