//! A one-dimensional instance on which the classic flood/refit loop raises
//! the deviation energy between consecutive refits before settling.
//!
//! The instance is a chain of `2n + 2` collinear points split into four
//! groups of normals:
//!
//! * points `0..n` ("left segment") share the diagonal normal
//!   `(-1, 1, 0) / sqrt(2)`,
//! * points `n..2n` ("right segment") share the vertical normal `(0, 1, 0)`,
//! * point `2n` carries the horizontal normal `(-1, 0, 0)`,
//! * point `2n + 1` carries `(-1, n, 0) / sqrt(n^2 + 1)`.
//!
//! Seeded on the two segments, the first flood assigns the two trailing
//! points to the right proxy. Refitting that proxy leaves a residual of
//! `2(n + 1) - 2 sqrt(n^2 + 1)`, which shrinks as `n` grows. The refit also
//! rotates the right proxy's normal onto the trailing point's direction, so
//! the next flood strands that proxy on the single trailing point and dumps
//! every other point into one partition whose residual
//! `2(2n + 1) - 2 sqrt(n^2 (2 + sqrt(2)) + sqrt(2) n + 1)` grows roughly
//! linearly in `n`. The loop therefore climbs from a near-zero energy to an
//! arbitrarily large one in a single round before converging.

use nalgebra::{Point3, Vector3};
use vsa_core::{NeighborGraph, PointCloud};
use vsa_segmentation::{
    run_pipeline_with_graph, Mode, PipelineConfig, PipelineOutcome, Seeding, StepKind,
};

use crate::error::{BenchError, BenchResult};

/// The chain instance plus the closed-form energies it is expected to visit.
#[derive(Debug, Clone)]
pub struct CounterexampleInstance {
    /// Number of points in each of the two constant-normal segments.
    pub n: usize,
    /// The `2n + 2` collinear points with their crafted normals.
    pub cloud: PointCloud,
    /// Hand-built chain adjacency `i ~ i + 1`.
    pub graph: NeighborGraph,
    /// Seed point indices for the two proxies (one per segment).
    pub seeds: [usize; 2],
    /// Closed-form total energy after the first refit.
    pub expected_e1: f64,
    /// Closed-form total energy after the second refit.
    pub expected_e2: f64,
}

/// Energies observed when running the classic loop on the chain instance.
#[derive(Debug, Clone)]
pub struct CounterexampleRun {
    /// Total energy reported by the first refit.
    pub e1: f64,
    /// Total energy reported by the second refit.
    pub e2: f64,
    /// Whether the classic loop reached a repeated assignment.
    pub converged: bool,
    /// Number of flood rounds performed.
    pub iterations: usize,
    /// Full trace of the run.
    pub outcome: PipelineOutcome,
}

/// Closed-form total energy after the first refit of the chain instance.
///
/// The right proxy absorbs the two trailing points, so its refit normal is
/// the normalized sum of `n` vertical normals plus the two trailing ones.
/// That sum has length `sqrt(n^2 + 1) + 1` over `n + 2` members, and a
/// proxy's residual against its optimal normal is twice the member count
/// minus twice the length of the summed normals.
pub fn expected_e1(n: usize) -> f64 {
    let n = n as f64;
    2.0 * (n + 1.0) - 2.0 * (n * n + 1.0).sqrt()
}

/// Closed-form total energy after the second refit of the chain instance.
///
/// The second flood leaves one proxy holding everything except the final
/// point. Its summed normals are `n` diagonal plus `n` vertical plus one
/// horizontal, with squared length `n^2 (2 + sqrt(2)) + sqrt(2) n + 1`.
pub fn expected_e2(n: usize) -> f64 {
    let s2 = 2.0_f64.sqrt();
    let n = n as f64;
    2.0 * (2.0 * n + 1.0) - 2.0 * ((2.0 + s2) * n * n + s2 * n + 1.0).sqrt()
}

/// Builds the chain instance for a given segment length `n >= 1`.
///
/// The adjacency is the explicit chain `i ~ i + 1`. Nearest-neighbor search
/// over collinear points would connect the trailing points to interior ones
/// and change which proxy can reach them, so the chain is supplied by hand.
pub fn build_counterexample(n: usize) -> BenchResult<CounterexampleInstance> {
    if n == 0 {
        return Err(BenchError::InvalidParameter {
            reason: "counterexample needs at least one point per segment".into(),
        });
    }
    let total = 2 * n + 2;
    let mut positions = Vec::with_capacity(total);
    let mut normals = Vec::with_capacity(total);
    let diag = 1.0 / 2.0_f64.sqrt();
    let tail_len = ((n * n + 1) as f64).sqrt();
    for i in 0..total {
        positions.push(Point3::new(i as f64, 0.0, 0.0));
        let normal = if i < n {
            Vector3::new(-diag, diag, 0.0)
        } else if i < 2 * n {
            Vector3::new(0.0, 1.0, 0.0)
        } else if i == 2 * n {
            Vector3::new(-1.0, 0.0, 0.0)
        } else {
            Vector3::new(-1.0 / tail_len, n as f64 / tail_len, 0.0)
        };
        normals.push(normal);
    }
    let cloud = PointCloud::with_unit_weights(positions, normals)?;
    let adjacency: Vec<Vec<usize>> = (0..total)
        .map(|i| {
            let mut row = Vec::new();
            if i > 0 {
                row.push(i - 1);
            }
            if i + 1 < total {
                row.push(i + 1);
            }
            row
        })
        .collect();
    let graph = NeighborGraph::from_adjacency(&cloud, adjacency)?;
    Ok(CounterexampleInstance {
        n,
        cloud,
        graph,
        seeds: [0, n],
        expected_e1: expected_e1(n),
        expected_e2: expected_e2(n),
    })
}

/// Runs the classic loop on the chain instance and extracts the energies
/// reported by the first two refits.
pub fn run_counterexample(n: usize) -> BenchResult<CounterexampleRun> {
    let instance = build_counterexample(n)?;
    let config = PipelineConfig {
        mode: Mode::Classic,
        seeding: Seeding::Explicit(instance.seeds.to_vec()),
        ..PipelineConfig::default()
    };
    let outcome = run_pipeline_with_graph(&instance.cloud, &instance.graph, &config)?;
    let e1 = refit_energy(&outcome, 1)?;
    let e2 = refit_energy(&outcome, 2)?;
    Ok(CounterexampleRun {
        e1,
        e2,
        converged: outcome.converged,
        iterations: outcome.iterations,
        outcome,
    })
}

fn refit_energy(outcome: &PipelineOutcome, iteration: usize) -> BenchResult<f64> {
    outcome
        .reports
        .iter()
        .find(|row| row.iteration == iteration && row.step == StepKind::Update)
        .map(|row| row.energy)
        .ok_or_else(|| BenchError::MissingReport {
            what: format!("refit energy for iteration {iteration}"),
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn pipeline_reproduces_closed_forms() {
        for n in [2, 10, 100, 1000] {
            let run = run_counterexample(n).unwrap();
            assert_relative_eq!(run.e1, expected_e1(n), epsilon = 1e-9);
            assert_relative_eq!(run.e2, expected_e2(n), epsilon = 1e-9);
        }
    }

    #[test]
    fn reference_values_at_n_100() {
        let run = run_counterexample(100).unwrap();
        assert!((run.e1 - 1.9900).abs() < 1e-3, "e1 = {}", run.e1);
        assert!((run.e2 - 31.6782).abs() < 1e-3, "e2 = {}", run.e2);
    }

    #[test]
    fn energy_rises_between_refits() {
        // At n = 1 the two closed forms coincide exactly, so the strict
        // increase only appears from n = 2 onward.
        for n in [2, 5, 10, 100] {
            let run = run_counterexample(n).unwrap();
            assert!(
                run.e2 > run.e1,
                "n = {n}: e2 = {} should exceed e1 = {}",
                run.e2,
                run.e1
            );
        }
    }

    #[test]
    fn classic_converges_on_third_flood() {
        let run = run_counterexample(100).unwrap();
        assert!(run.converged);
        assert_eq!(run.iterations, 3);
    }

    #[test]
    fn switch_mode_accepts_no_moves() {
        let instance = build_counterexample(100).unwrap();
        let config = PipelineConfig {
            mode: Mode::Switch,
            seeding: Seeding::Explicit(instance.seeds.to_vec()),
            enable_split: false,
            enable_merge: false,
            ..PipelineConfig::default()
        };
        let outcome = run_pipeline_with_graph(&instance.cloud, &instance.graph, &config).unwrap();
        assert!(outcome.converged);
        assert!(outcome
            .reports
            .iter()
            .all(|row| row.step != StepKind::Switch));
        let total: f64 = outcome
            .segmentation
            .proxies
            .iter()
            .map(|p| p.energy)
            .sum();
        assert_relative_eq!(total, expected_e1(100), epsilon = 1e-9);
    }

    #[test]
    fn rejects_empty_segments() {
        assert!(matches!(
            build_counterexample(0),
            Err(BenchError::InvalidParameter { .. })
        ));
    }
}
