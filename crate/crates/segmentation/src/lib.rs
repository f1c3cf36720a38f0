//! Variational planar-proxy segmentation of oriented point sets.
//!
//! The crate partitions a point cloud into regions that are each well
//! approximated by a plane, by minimizing the L^2,1 normal-deviation
//! energy. Two drivers are provided:
//!
//! - [`Mode::Classic`]: Lloyd-style alternation of priority flooding,
//!   proxy fitting and re-seeding. Fast in practice but without a
//!   convergence guarantee — on some inputs it oscillates.
//! - [`Mode::Switch`]: a single flood followed by monotone refinement via
//!   single best-point reassignments, with optional automatic splitting of
//!   over-budget proxies and merging of adjacent under-budget pairs, then
//!   a final cut of every proxy into connected components. Energy descent
//!   guarantees termination.
//!
//! The individual steps ([`flood`], [`proxy_update`], [`seed_step`],
//! [`switch_step`], [`split_proxy`], [`merge_proxies`],
//! [`proxy_adjacency`], [`relabel_components`]) are public so callers can
//! compose their own loops; [`run_pipeline`] wires them together as
//! described above and logs an [`IterationReport`] per step.

mod adjacency;
mod config;
mod error;
mod flood;
mod merge;
mod pipeline;
mod relabel;
mod seeds;
mod split;
mod switch;
mod update;

pub use adjacency::proxy_adjacency;
pub use config::{
    IterationReport, Mode, PipelineConfig, PipelineOutcome, Seeding, StepKind,
};
pub use error::{MergeRejection, SegmentationError, SegmentationResult, SplitRejection};
pub use flood::flood;
pub use merge::{evaluate_merge, merge_proxies, MergeCandidate};
pub use pipeline::{run_pipeline, run_pipeline_with_graph};
pub use relabel::relabel_components;
pub use seeds::{seed_step, select_seeds};
pub use split::split_proxy;
pub use switch::{switch_step, SwitchMove};
pub use update::proxy_update;
