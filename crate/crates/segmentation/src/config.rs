//! Pipeline configuration and per-step reporting.

use std::fmt;

/// Which driver loop refines the segmentation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Alternate whole-cloud flooding, proxy fitting and re-seeding until
    /// the assignment repeats. May oscillate on some inputs.
    Classic,
    /// One flood, then single best-point reassignments interleaved with
    /// proxy fitting (plus optional splits and merges). Energy decreases
    /// monotonically, so termination is guaranteed.
    Switch,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Classic => write!(f, "classic"),
            Mode::Switch => write!(f, "switch"),
        }
    }
}

/// How initial seed points are chosen.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Seeding {
    /// Use exactly these point indices.
    Explicit(Vec<usize>),
    /// Sample this many distinct points uniformly (deterministic in the
    /// configured RNG seed).
    Count(usize),
    /// Every point starts as its own proxy; merging does the coarsening.
    AllPoints,
}

/// Parameters of a segmentation run.
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub mode: Mode,
    /// Split/merge energy threshold; proxies above it split, adjacent pairs
    /// merging below it fuse. Must be positive.
    pub eta: f64,
    /// Neighborhood size for the k-nearest graph.
    pub k: usize,
    pub seeding: Seeding,
    /// Allow splitting over-threshold proxies (switch mode only).
    pub enable_split: bool,
    /// Allow merging adjacent proxies under the threshold (switch mode only).
    pub enable_merge: bool,
    /// Hard iteration cap for either mode.
    pub max_iterations: usize,
    /// Seed for all randomness (seed sampling); same seed, same result.
    pub rng_seed: u64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            mode: Mode::Switch,
            eta: 1.0,
            k: 8,
            seeding: Seeding::Count(6),
            enable_split: true,
            enable_merge: true,
            max_iterations: 100,
            rng_seed: 0,
        }
    }
}

/// The kind of step an [`IterationReport`] row describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepKind {
    Flood,
    Update,
    Seed,
    Switch,
    Split,
    Merge,
    Relabel,
}

/// One logged pipeline step: the energy and proxy count after the step and
/// how many points changed proxy during it.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationReport {
    /// Outer iteration the step belongs to (0 = initial flood).
    pub iteration: usize,
    pub step: StepKind,
    /// Total energy after the step.
    pub energy: f64,
    /// Number of proxies after the step.
    pub proxy_count: usize,
    /// Points whose proxy id changed during the step.
    pub reassigned: usize,
}

/// Result of a pipeline run: the final segmentation, the step log, and
/// whether the loop reached its natural stopping condition before the
/// iteration cap.
#[derive(Debug, Clone)]
pub struct PipelineOutcome {
    pub segmentation: vsa_core::Segmentation,
    pub reports: Vec<IterationReport>,
    pub converged: bool,
    /// Outer iterations actually executed.
    pub iterations: usize,
}
