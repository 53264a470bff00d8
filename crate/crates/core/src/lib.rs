//! Broadcast Independence and Broadcast Packing on connected, optionally
//! edge-weighted graphs: tree-decomposition DP, brute-force oracle,
//! truncation transforms and hardness-instance generators.

pub mod cli;
pub mod dp;
pub mod error;
pub mod graph;
pub mod nice;
pub mod oracle;
pub mod reductions;
pub mod td;
pub mod transforms;
pub mod validate;

pub use error::{GraphError, OracleError, ReductionError, SolveError, TdError, TransformError};
pub use graph::{parse_graph, parse_witness, Broadcast, Vertex, WeightedGraph};
pub use nice::{make_nice, NiceTreeDecomposition, NodeKind};
pub use td::{heuristic_decompose, parse_td, TreeDecomposition};
pub use validate::{is_broadcast_packing, is_independent_broadcast, Problem};
