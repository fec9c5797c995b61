//! The Metropolis flip walk on connected partitions and its instrumentation.

mod chain;
mod heatmap;

pub use chain::*;
pub use heatmap::*;
