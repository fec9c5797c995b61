//! Graph families, initial partitions, vote overlays and the JSON graph format.

mod families;
mod io;
mod party;

pub use families::*;
pub use io::*;
pub use party::*;
