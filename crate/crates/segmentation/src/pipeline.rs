//! The two segmentation driver loops.
//!
//! **Classic** alternates whole-cloud flooding, proxy fitting and
//! re-seeding. Each half-step is individually optimal, but the pair is not
//! a joint descent — the flood energy of iteration `t + 1` can exceed the
//! fitted energy of iteration `t`, and on some inputs the loop oscillates
//! forever. It stops when two consecutive floods produce the same
//! assignment or when the iteration cap is reached.
//!
//! **Switch** floods once, then repeats: refit all proxies, optionally
//! split every proxy over the energy budget and merge adjacent pairs that
//! fit under it, then apply the single most profitable boundary-point
//! reassignment. Refits never increase the energy and each reassignment
//! strictly decreases it, so between structural changes the loop can never
//! revisit an assignment — that part is asserted. Merges may *raise* the
//! energy, so split/merge/switch rounds can undo each other and cycle
//! forever (this actually happens on random inputs). A refit state is a
//! pure function of the assignment, hence seeing the same post-refit
//! assignment twice proves such a cycle; the loop then freezes further
//! splits and merges and the strict descent of the remaining refit/switch
//! rounds guarantees termination. At the end, proxies are cut into
//! connected components.

use std::collections::HashSet;

use nalgebra::Vector3;
use vsa_core::{build_neighbor_graph, NeighborGraph, PointCloud, Segmentation};

use crate::adjacency::proxy_adjacency;
use crate::config::{IterationReport, Mode, PipelineConfig, PipelineOutcome, StepKind};
use crate::error::{SegmentationError, SegmentationResult};
use crate::flood::flood;
use crate::merge::{evaluate_merge, merge_proxies};
use crate::relabel::relabel_components;
use crate::seeds::{seed_step, select_seeds};
use crate::split::split_proxy;
use crate::switch::switch_step;
use crate::update::proxy_update;

/// Runs the configured pipeline, building the k-nearest neighbor graph
/// from `config.k` first.
pub fn run_pipeline(cloud: &PointCloud, config: &PipelineConfig) -> SegmentationResult<PipelineOutcome> {
    let graph = build_neighbor_graph(cloud, config.k)?;
    run_pipeline_with_graph(cloud, &graph, config)
}

/// Runs the configured pipeline over a caller-provided neighbor graph
/// (hand-built chains, grids, ...).
pub fn run_pipeline_with_graph(
    cloud: &PointCloud,
    graph: &NeighborGraph,
    config: &PipelineConfig,
) -> SegmentationResult<PipelineOutcome> {
    validate_config(config)?;
    match config.mode {
        Mode::Classic => run_classic(cloud, graph, config),
        Mode::Switch => run_switch(cloud, graph, config),
    }
}

fn validate_config(config: &PipelineConfig) -> SegmentationResult<()> {
    if config.eta <= 0.0 || !config.eta.is_finite() {
        return Err(SegmentationError::InvalidConfig {
            reason: format!("eta must be positive and finite, got {}", config.eta),
        });
    }
    if config.max_iterations == 0 {
        return Err(SegmentationError::InvalidConfig {
            reason: "max_iterations must be at least 1".into(),
        });
    }
    Ok(())
}

/// Sum of the cached proxy energies; kept exact by every operation, cheap
/// enough to log after each step.
fn cached_total(segmentation: &Segmentation) -> f64 {
    segmentation.proxies.iter().map(|p| p.energy).sum()
}

fn report(
    reports: &mut Vec<IterationReport>,
    iteration: usize,
    step: StepKind,
    segmentation: &Segmentation,
    reassigned: usize,
) {
    reports.push(IterationReport {
        iteration,
        step,
        energy: cached_total(segmentation),
        proxy_count: segmentation.proxy_count(),
        reassigned,
    });
}

fn count_changed(before: &[Option<usize>], after: &[Option<usize>]) -> usize {
    before.iter().zip(after).filter(|(a, b)| a != b).count()
}

fn run_classic(
    cloud: &PointCloud,
    graph: &NeighborGraph,
    config: &PipelineConfig,
) -> SegmentationResult<PipelineOutcome> {
    let seeds = select_seeds(cloud, &config.seeding, config.rng_seed)?;
    let flood_seeds: Vec<(usize, Vector3<f64>)> =
        seeds.iter().map(|&s| (s, cloud.normal(s))).collect();
    let mut segmentation = flood(cloud, graph, &flood_seeds)?;
    let mut reports = Vec::new();
    report(&mut reports, 1, StepKind::Flood, &segmentation, cloud.len());

    let mut converged = false;
    let mut iterations = 1;
    for iter in 1..=config.max_iterations {
        iterations = iter;
        proxy_update(cloud, &mut segmentation)?;
        report(&mut reports, iter, StepKind::Update, &segmentation, 0);
        let seeds = seed_step(cloud, &segmentation);
        report(&mut reports, iter, StepKind::Seed, &segmentation, 0);
        if iter == config.max_iterations {
            break;
        }
        let flood_seeds: Vec<(usize, Vector3<f64>)> = seeds
            .iter()
            .zip(&segmentation.proxies)
            .map(|(&s, proxy)| (s, proxy.normal))
            .collect();
        let next = flood(cloud, graph, &flood_seeds)?;
        let changed = count_changed(&segmentation.assignment, &next.assignment);
        report(&mut reports, iter + 1, StepKind::Flood, &next, changed);
        let repeated = next.assignment == segmentation.assignment;
        segmentation = next;
        if repeated {
            // Fixed point: flooding with the fitted normals reproduced the
            // previous assignment, so those normals are already optimal
            // for the memberships they flooded.
            iterations = iter + 1;
            converged = true;
            break;
        }
    }

    Ok(PipelineOutcome {
        segmentation,
        reports,
        converged,
        iterations,
    })
}

fn run_switch(
    cloud: &PointCloud,
    graph: &NeighborGraph,
    config: &PipelineConfig,
) -> SegmentationResult<PipelineOutcome> {
    let seeds = select_seeds(cloud, &config.seeding, config.rng_seed)?;
    let flood_seeds: Vec<(usize, Vector3<f64>)> =
        seeds.iter().map(|&s| (s, cloud.normal(s))).collect();
    let mut segmentation = flood(cloud, graph, &flood_seeds)?;
    let mut reports = Vec::new();
    report(&mut reports, 0, StepKind::Flood, &segmentation, cloud.len());

    let mut seen_states = HashSet::new();
    seen_states.insert(state_hash(&segmentation));
    let mut update_states = HashSet::new();
    let mut structure_frozen = false;
    let mut converged = false;
    let mut iterations = 0;
    for iter in 1..=config.max_iterations {
        iterations = iter;
        proxy_update(cloud, &mut segmentation)?;
        report(&mut reports, iter, StepKind::Update, &segmentation, 0);

        // Right after a refit every proxy is a pure function of the
        // assignment, so this state determines the whole rest of the run.
        // Meeting it a second time proves the structural operators cycle
        // (merges may raise the energy and undo earlier progress); freeze
        // them and let the strictly descending refit/switch rounds finish.
        if !structure_frozen && !update_states.insert(state_hash(&segmentation)) {
            structure_frozen = true;
        }

        let mut structural = false;
        if config.enable_split && !structure_frozen {
            structural |= split_pass(cloud, &mut segmentation, config.eta, iter, &mut reports);
        }
        if config.enable_merge && !structure_frozen {
            structural |= merge_pass(cloud, graph, &mut segmentation, config.eta, iter, &mut reports);
        }
        if structural {
            // Splits and merges change the proxy set, restarting the
            // energy-descent argument; earlier assignments are reachable
            // again in principle.
            seen_states.clear();
            seen_states.insert(state_hash(&segmentation));
        }

        match switch_step(cloud, graph, &mut segmentation)? {
            Some(_) => {
                report(&mut reports, iter, StepKind::Switch, &segmentation, 1);
                if !seen_states.insert(state_hash(&segmentation)) {
                    return Err(SegmentationError::StateRepeated { iteration: iter });
                }
            }
            None => {
                if !structural {
                    converged = true;
                    break;
                }
            }
        }
    }

    let before = segmentation.assignment.clone();
    relabel_components(cloud, graph, &mut segmentation)?;
    let changed = count_changed(&before, &segmentation.assignment);
    report(&mut reports, iterations, StepKind::Relabel, &segmentation, changed);

    Ok(PipelineOutcome {
        segmentation,
        reports,
        converged,
        iterations,
    })
}

/// One split sweep: snapshot the proxies above the budget, largest energy
/// first, and split each at most once. Children are not revisited until
/// the next outer iteration.
fn split_pass(
    cloud: &PointCloud,
    segmentation: &mut Segmentation,
    eta: f64,
    iteration: usize,
    reports: &mut Vec<IterationReport>,
) -> bool {
    let mut snapshot: Vec<(f64, usize)> = segmentation
        .proxies
        .iter()
        .filter(|p| p.size() >= 2 && p.energy > eta)
        .map(|p| (p.energy, p.id))
        .collect();
    snapshot.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    let mut applied = false;
    for (_, id) in snapshot {
        if let Ok((_, second)) = split_proxy(cloud, segmentation, id) {
            let moved = segmentation.proxies[second].size();
            report(reports, iteration, StepKind::Split, segmentation, moved);
            applied = true;
        }
    }
    applied
}

/// Greedy merging: repeatedly merge the adjacent pair with the smallest
/// merged energy, as long as that energy is strictly under the budget,
/// recomputing adjacency after every merge.
fn merge_pass(
    cloud: &PointCloud,
    graph: &NeighborGraph,
    segmentation: &mut Segmentation,
    eta: f64,
    iteration: usize,
    reports: &mut Vec<IterationReport>,
) -> bool {
    let mut applied = false;
    while segmentation.proxy_count() > 1 {
        let adjacency = proxy_adjacency(graph, segmentation);
        let mut best: Option<(f64, usize, usize)> = None;
        for &(i, j) in &adjacency {
            let Ok(candidate) = evaluate_merge(cloud, segmentation, i, j) else {
                continue;
            };
            if candidate.energy >= eta {
                continue;
            }
            let better = match best {
                None => true,
                Some((be, bi, bj)) => candidate
                    .energy
                    .total_cmp(&be)
                    .then(i.cmp(&bi))
                    .then(j.cmp(&bj))
                    .is_lt(),
            };
            if better {
                best = Some((candidate.energy, i, j));
            }
        }
        let Some((_, i, j)) = best else { break };
        let moved = segmentation.proxies[i.max(j)].size();
        merge_proxies(cloud, segmentation, i, j, eta)
            .expect("pre-evaluated merge cannot be rejected");
        report(reports, iteration, StepKind::Merge, segmentation, moved);
        applied = true;
    }
    applied
}

/// FNV-1a over the assignment and the proxy count; used by the
/// termination guard.
fn state_hash(segmentation: &Segmentation) -> u64 {
    const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const PRIME: u64 = 0x0000_0100_0000_01b3;
    let mut hash = OFFSET;
    let mut absorb = |value: u64| {
        hash ^= value;
        hash = hash.wrapping_mul(PRIME);
    };
    absorb(segmentation.proxy_count() as u64);
    for slot in &segmentation.assignment {
        absorb(slot.map_or(0, |id| id as u64 + 1));
    }
    hash
}
