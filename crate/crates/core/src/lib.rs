pub mod audit;
pub mod canon;
pub mod constructive;
pub mod error;
pub mod families;
pub mod format;
pub mod graph;
pub mod set;
pub mod solver;
pub mod verify;

pub use error::{Error, NoCodeReason, Result};
pub use graph::{Graph, Subgraph, VertexClass};
pub use set::VertexSet;
pub use verify::{Verdict, Violation};
