//! Exact counting, exact sampling and flip-walk Markov chains for connected graph
//! partitions, with the gadget constructions and duality maps that relate them.

pub mod error;
pub mod flip;
pub mod gadgets;
pub mod generators;
pub mod graph;
pub mod oracle;
pub mod partition;
pub mod plane;
pub mod samplers;
pub mod spdp;

pub use error::{Error, Result};
pub use graph::{EdgeId, EdgeSet, MultiGraph, NodeId};
pub use partition::Partition;
pub use plane::PlaneGraph;
