//! Benchmark instances, synthetic shapes, and analytic references for the
//! planar-proxy segmentation pipeline.
//!
//! The crate bundles everything needed to exercise the segmentation loops on
//! inputs with known answers: a chain instance whose classic-loop energies
//! follow closed forms, a closed band on which the classic loop cycles, exact
//! mean curvature and energy-budget formulas for paraboloid patches, samplers
//! for simple solids, and a small experiment harness that turns pipeline runs
//! into CSV rows.

mod counterexample;
mod decagon;
mod error;
mod experiment;
mod instances;
mod paraboloid;
mod shapes;

pub use counterexample::{
    build_counterexample, expected_e1, expected_e2, run_counterexample, CounterexampleInstance,
    CounterexampleRun,
};
pub use decagon::{build_decagon_band, nonconvergence_witness, SEGMENTS};
pub use error::{BenchError, BenchResult};
pub use experiment::{run_experiments, ExperimentConfig, ExperimentRow, CSV_HEADER};
pub use instances::{noisy_dodecahedron, sweep_sphere, DODECA_K, SWEEP_ETAS, SWEEP_K};
pub use paraboloid::{eta_heuristic, paraboloid_grid, paraboloid_mean_curvature, EtaHeuristicInput};
pub use shapes::{
    cube_cloud, dodecahedron_cloud, mean_nearest_distance, mean_neighbor_distance,
    octahedron_cloud, perturb, scale_cloud, sphere_cloud,
};
