//! Temporal walk centrality.
//!
//! A node is central when many time-respecting walks can reach it and then
//! continue from it. The crate computes the per-node, per-time weighted walk
//! counts `W^in`/`W^out` with three interchangeable backends and combines them
//! into one score per node:
//!
//! * [`streamwalk`]: two passes over the chronological edge stream (requires `delta > 0`),
//! * [`walkalgebra`] over the [`linegraph`] expansion: exact LU solve, fixed-point
//!   iteration, or topological relaxation when the expansion is acyclic,
//! * [`oracle`]: brute-force walk enumeration, used as ground truth.
//!
//! [`pipeline`] wires graph, weights and backend together; [`analysis`] holds
//! ranking comparison metrics.

pub mod analysis;
pub mod centrality;
pub mod cli;
pub mod error;
pub mod format;
pub mod linegraph;
pub mod oracle;
pub mod pipeline;
pub mod streamwalk;
pub mod tempgraph;
pub mod walkalgebra;
pub mod weightfn;

pub use centrality::{CentralityResult, Mode};
pub use error::{Result, TwcError};
pub use linegraph::DirectedLineGraph;
pub use pipeline::{Method, PipelineOptions};
pub use streamwalk::{Direction, WalkWeightMatrix};
pub use tempgraph::{GraphStats, IngestOptions, NodeId, TemporalEdge, TemporalGraph, Timestamp};
pub use weightfn::{WeightConfig, WeightFunction};
