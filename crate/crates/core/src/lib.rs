//! Core data model for variational planar-proxy approximation of oriented
//! point sets.
//!
//! The crate provides the vocabulary shared by the segmentation, mesh
//! extraction and benchmarking crates:
//!
//! - [`PointCloud`] — positions with unit normals and positive per-point
//!   weights,
//! - [`NeighborGraph`] — exact k-nearest neighborhoods with symmetrized and
//!   ball-extended views,
//! - [`Proxy`] / [`Segmentation`] — planar proxies and the partition of the
//!   cloud among them,
//! - the L^2,1 normal-deviation energy ([`proxy_energy`], [`total_energy`])
//!   with its closed-form minimizing normal ([`optimal_normal`]), and the
//!   geometric error [`mse`].
//!
//! All quantities are `f64` and all tie-breaking is by ascending index, so
//! identical inputs produce bit-identical results.

mod cloud;
mod energy;
mod error;
mod graph;
mod kdtree;
mod proxy;

pub use cloud::PointCloud;
pub use energy::{least_deviation_member, mse, optimal_normal, proxy_energy, total_energy};
pub use error::{CoreError, CoreResult};
pub use graph::{build_neighbor_graph, compute_area_weights, NeighborGraph};
pub use kdtree::KdTree;
pub use proxy::{Proxy, Segmentation};
