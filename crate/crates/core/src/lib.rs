//! Componentwise eigenvector centrality for directed, non-negatively weighted
//! graphs.
//!
//! The graph is split into strongly connected components, which are visited
//! level by level from sources to sinks. Components that cannot carry the
//! dominant eigenvalue are solved with a convergent series driven by the
//! weight flowing into them; the rest fall back to power iteration.

pub mod baseline;
pub mod blocks;
pub mod condensation;
pub mod driver;
pub mod error;
pub mod generate;
pub mod graph;
pub mod kernels;

pub use baseline::{run_baseline, BaselineRun};
pub use blocks::{detect_blocks, merge_isolated_blocks, run_auto_blocks, BlockPartition};
pub use condensation::{
    assign_levels, find_components, group_single_vertex_components, ComponentId, Decomposition,
    SingleVertexGroup,
};
pub use driver::{run_componentwise, ComponentwiseSolver, RunReport, Solution};
pub use error::{GraphError, Result, SolveError};
pub use graph::{parse_edge_list, LinearOperator, ParseOptions, SparseGraph, VertexId};
pub use kernels::{
    power_iteration, series_accumulate, single_vertex_batch, IterationOutcome, SolveOptions,
    Status,
};
