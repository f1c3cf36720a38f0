//! Vertex positions by constrained optimization.
//!
//! Instead of intersecting three planes per tuple, all vertices and slightly
//! corrected proxy normals are solved together:
//!
//! minimize   sum_j sum_{i in T_j} |x_j - C_i|^2  +  sum_i w_i |n_i - N_i|^2
//! subject to n_i . (x_j - C_i) = 0   for every vertex j and proxy i in T_j,
//!            |n_i|^2 = 1            for every proxy i in some tuple,
//!
//! where `C_i`, `N_i` are the fitted proxy plane and `T_j` is the tuple of
//! vertex `j`. At a feasible solution every vertex lies exactly on all of its
//! proxies' corrected planes, so every face is planar by construction — also
//! for tuples of more than three proxies, which the direct method cannot
//! honor. The position term anchors vertices near the contributing regions
//! and keeps near-parallel tuples bounded.
//!
//! The constrained problem is solved with an augmented-Lagrangian outer loop
//! (multiplier estimates plus a growing quadratic penalty) around a limited-
//! memory quasi-Newton inner minimizer with backtracking line search.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use nalgebra::{Point3, Vector3};

use vsa_core::{PointCloud, Segmentation};

use crate::error::{SimplifyError, SimplifyResult};
use crate::types::{QTuple, SolvedVertices, SolverConfig};

/// Initial quadratic-penalty weight.
pub const MU_INITIAL: f64 = 10.0;
/// Penalty growth factor applied when constraints stall.
pub const MU_GROWTH: f64 = 10.0;
/// The violation must shrink by at least this factor per outer iteration,
/// otherwise the penalty grows.
const VIOLATION_DECREASE: f64 = 0.25;
/// Number of curvature pairs kept by the inner minimizer.
const LBFGS_HISTORY: usize = 8;
/// Inner iteration budget per outer iteration.
const MAX_INNER_ITERATIONS: usize = 400;
/// Sufficient-decrease slope for the backtracking line search.
const ARMIJO_SLOPE: f64 = 1e-4;
/// Step shrink factor of the line search.
const BACKTRACK_FACTOR: f64 = 0.5;
/// Backtracking attempts before the line search gives up.
const MAX_BACKTRACKS: usize = 60;
/// Inner loop stops when the gradient infinity norm falls below this times
/// `1 + |value|`.
const GRADIENT_TOL: f64 = 1e-9;

/// The coupled vertex/normal problem in flat-vector form.
///
/// Variables are laid out as `[x_0, x_1, ..., n_0, n_1, ...]`: three vertex
/// coordinates per tuple followed by three normal coordinates per *active*
/// proxy (a proxy appearing in at least one tuple). Proxies outside every
/// tuple have no variables; they keep their fitted normals.
#[derive(Debug, Clone)]
pub struct ConstrainedProblem {
    centers: Vec<Point3<f64>>,
    fitted: Vec<Vector3<f64>>,
    wtilde: Vec<f64>,
    tuples: Vec<QTuple>,
    active: Vec<usize>,
    slot_of: BTreeMap<usize, usize>,
    lambda_offsets: Vec<usize>,
}

impl ConstrainedProblem {
    /// Builds the problem from per-proxy planes `(centers, fitted normals)`,
    /// per-proxy normal-deviation weights and the vertex tuples.
    pub fn new(
        centers: Vec<Point3<f64>>,
        fitted: Vec<Vector3<f64>>,
        wtilde: Vec<f64>,
        tuples: Vec<QTuple>,
    ) -> SimplifyResult<Self> {
        let proxy_count = centers.len();
        if fitted.len() != proxy_count || wtilde.len() != proxy_count {
            return Err(SimplifyError::InconsistentInput {
                reason: format!(
                    "{proxy_count} centers vs {} normals vs {} weights",
                    fitted.len(),
                    wtilde.len()
                ),
            });
        }
        if let Some(n) = fitted.iter().find(|n| (n.norm() - 1.0).abs() > 1e-6) {
            return Err(SimplifyError::InconsistentInput {
                reason: format!("fitted normal {n:?} is not unit length"),
            });
        }
        if let Some(w) = wtilde.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
            return Err(SimplifyError::InvalidConfig {
                reason: format!("normal-deviation weight must be non-negative, got {w}"),
            });
        }
        let mut active_set = BTreeSet::new();
        let mut lambda_offsets = Vec::with_capacity(tuples.len() + 1);
        lambda_offsets.push(0);
        for tuple in &tuples {
            if tuple.proxies.is_empty() {
                return Err(SimplifyError::InconsistentInput {
                    reason: "empty vertex tuple".into(),
                });
            }
            if !tuple.proxies.windows(2).all(|w| w[0] < w[1]) {
                return Err(SimplifyError::InconsistentInput {
                    reason: format!("tuple {:?} is not sorted and distinct", tuple.proxies),
                });
            }
            if *tuple.proxies.last().expect("non-empty") >= proxy_count {
                return Err(SimplifyError::InconsistentInput {
                    reason: format!(
                        "tuple {:?} references a proxy outside 0..{proxy_count}",
                        tuple.proxies
                    ),
                });
            }
            active_set.extend(tuple.proxies.iter().copied());
            lambda_offsets.push(lambda_offsets.last().expect("seeded") + tuple.q());
        }
        let active: Vec<usize> = active_set.into_iter().collect();
        let slot_of = active
            .iter()
            .enumerate()
            .map(|(slot, &proxy)| (proxy, slot))
            .collect();
        Ok(Self {
            centers,
            fitted,
            wtilde,
            tuples,
            active,
            slot_of,
            lambda_offsets,
        })
    }

    /// Number of solved vertices (one per tuple).
    pub fn vertex_count(&self) -> usize {
        self.tuples.len()
    }

    /// Proxies owning a corrected-normal variable, ascending.
    pub fn active_proxies(&self) -> &[usize] {
        &self.active
    }

    /// Total number of scalar variables.
    pub fn var_count(&self) -> usize {
        3 * (self.tuples.len() + self.active.len())
    }

    /// Number of vertex-on-plane constraints.
    pub fn plane_constraint_count(&self) -> usize {
        *self.lambda_offsets.last().expect("seeded")
    }

    /// Number of unit-normal constraints.
    pub fn unit_constraint_count(&self) -> usize {
        self.active.len()
    }

    /// Start point: each vertex at the barycenter of its tuple's plane
    /// centers, each corrected normal at the fitted normal.
    pub fn initial_vars(&self) -> Vec<f64> {
        let mut vars = Vec::with_capacity(self.var_count());
        for tuple in &self.tuples {
            let mut barycenter = Vector3::zeros();
            for &i in &tuple.proxies {
                barycenter += self.centers[i].coords;
            }
            barycenter /= tuple.q() as f64;
            vars.extend_from_slice(barycenter.as_slice());
        }
        for &i in &self.active {
            vars.extend_from_slice(self.fitted[i].as_slice());
        }
        vars
    }

    /// The vertex of tuple `j` in the given variable vector.
    pub fn vertex(&self, vars: &[f64], j: usize) -> Point3<f64> {
        Point3::new(vars[3 * j], vars[3 * j + 1], vars[3 * j + 2])
    }

    /// The corrected normal of active slot `slot` in the variable vector.
    pub fn corrected_normal(&self, vars: &[f64], slot: usize) -> Vector3<f64> {
        let base = 3 * (self.tuples.len() + slot);
        Vector3::new(vars[base], vars[base + 1], vars[base + 2])
    }

    fn normal_base(&self, slot: usize) -> usize {
        3 * (self.tuples.len() + slot)
    }

    /// The raw objective: vertex-anchoring plus normal-deviation cost.
    pub fn objective(&self, vars: &[f64]) -> f64 {
        let mut value = 0.0;
        for (j, tuple) in self.tuples.iter().enumerate() {
            let x = self.vertex(vars, j);
            for &i in &tuple.proxies {
                value += (x - self.centers[i]).norm_squared();
            }
        }
        for (slot, &i) in self.active.iter().enumerate() {
            let n = self.corrected_normal(vars, slot);
            value += self.wtilde[i] * (n - self.fitted[i]).norm_squared();
        }
        value
    }

    /// Residuals of all plane constraints (flattened per tuple, in tuple
    /// member order) and all unit-normal constraints (in active order).
    pub fn constraint_values(&self, vars: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let mut plane = Vec::with_capacity(self.plane_constraint_count());
        for (j, tuple) in self.tuples.iter().enumerate() {
            let x = self.vertex(vars, j);
            for &i in &tuple.proxies {
                let n = self.corrected_normal(vars, self.slot_of[&i]);
                plane.push(n.dot(&(x - self.centers[i])));
            }
        }
        let unit = self
            .active
            .iter()
            .enumerate()
            .map(|(slot, _)| self.corrected_normal(vars, slot).norm_squared() - 1.0)
            .collect();
        (plane, unit)
    }

    /// Largest absolute constraint residual.
    pub fn max_violation(&self, vars: &[f64]) -> f64 {
        let (plane, unit) = self.constraint_values(vars);
        plane
            .iter()
            .chain(unit.iter())
            .fold(0.0, |acc: f64, r| acc.max(r.abs()))
    }

    /// The augmented Lagrangian: objective plus multiplier and quadratic
    /// penalty terms for every constraint.
    pub fn augmented_value(&self, vars: &[f64], m: &Multipliers) -> f64 {
        let mut value = self.objective(vars);
        let (plane, unit) = self.constraint_values(vars);
        for (idx, g) in plane.iter().enumerate() {
            value += m.lambda[idx] * g + 0.5 * m.mu * g * g;
        }
        for (slot, h) in unit.iter().enumerate() {
            value += m.kappa[slot] * h + 0.5 * m.mu * h * h;
        }
        value
    }

    /// Analytic gradient of [`ConstrainedProblem::augmented_value`] with
    /// respect to every variable.
    pub fn augmented_gradient(&self, vars: &[f64], m: &Multipliers) -> Vec<f64> {
        let mut grad = vec![0.0; self.var_count()];
        for (j, tuple) in self.tuples.iter().enumerate() {
            let x = self.vertex(vars, j);
            for (member, &i) in tuple.proxies.iter().enumerate() {
                let slot = self.slot_of[&i];
                let n = self.corrected_normal(vars, slot);
                let d = x - self.centers[i];
                let g = n.dot(&d);
                let coef = m.lambda[self.lambda_offsets[j] + member] + m.mu * g;
                let base = self.normal_base(slot);
                for t in 0..3 {
                    grad[3 * j + t] += 2.0 * d[t] + coef * n[t];
                    grad[base + t] += coef * d[t];
                }
            }
        }
        for (slot, &i) in self.active.iter().enumerate() {
            let n = self.corrected_normal(vars, slot);
            let h = n.norm_squared() - 1.0;
            let coef = 2.0 * (m.kappa[slot] + m.mu * h);
            let base = self.normal_base(slot);
            for t in 0..3 {
                grad[base + t] += 2.0 * self.wtilde[i] * (n[t] - self.fitted[i][t]) + coef * n[t];
            }
        }
        grad
    }
}

/// Lagrange-multiplier estimates and the penalty weight.
#[derive(Debug, Clone)]
pub struct Multipliers {
    /// One multiplier per plane constraint, in
    /// [`ConstrainedProblem::constraint_values`] order.
    pub lambda: Vec<f64>,
    /// One multiplier per unit-normal constraint, in active-proxy order.
    pub kappa: Vec<f64>,
    /// Quadratic penalty weight.
    pub mu: f64,
}

impl Multipliers {
    /// Zero multipliers with the initial penalty weight.
    pub fn zeros(problem: &ConstrainedProblem) -> Self {
        Multipliers {
            lambda: vec![0.0; problem.plane_constraint_count()],
            kappa: vec![0.0; problem.unit_constraint_count()],
            mu: MU_INITIAL,
        }
    }
}

/// Result of the augmented-Lagrangian loop.
#[derive(Debug, Clone)]
pub struct SolvedProblem {
    /// Final variables; the best iterate seen when infeasible.
    pub vars: Vec<f64>,
    /// Multiplier state belonging to `vars`.
    pub multipliers: Multipliers,
    /// Whether the constraint tolerance was met.
    pub feasible: bool,
    /// Outer iterations actually spent.
    pub outer_iterations: usize,
    /// Largest constraint residual at `vars`.
    pub violation: f64,
}

/// Runs the augmented-Lagrangian loop on the problem. The `wtilde` part of
/// the config is ignored here — it is already baked into the problem.
pub fn minimize_constrained(problem: &ConstrainedProblem, config: &SolverConfig) -> SolvedProblem {
    let mut vars = problem.initial_vars();
    let mut m = Multipliers::zeros(problem);
    let mut best: Option<(f64, Vec<f64>, Multipliers)> = None;
    let mut previous_violation = f64::INFINITY;
    for outer in 1..=config.max_outer {
        lbfgs_minimize(problem, &m, &mut vars, config.step_tol);
        let (plane, unit) = problem.constraint_values(&vars);
        let violation = plane
            .iter()
            .chain(unit.iter())
            .fold(0.0, |acc: f64, r| acc.max(r.abs()));
        for (idx, g) in plane.iter().enumerate() {
            m.lambda[idx] += m.mu * g;
        }
        for (slot, h) in unit.iter().enumerate() {
            m.kappa[slot] += m.mu * h;
        }
        if best.as_ref().is_none_or(|(v, _, _)| violation < *v) {
            best = Some((violation, vars.clone(), m.clone()));
        }
        if violation <= config.constraint_tol {
            return SolvedProblem {
                vars,
                multipliers: m,
                feasible: true,
                outer_iterations: outer,
                violation,
            };
        }
        if violation > VIOLATION_DECREASE * previous_violation {
            m.mu *= MU_GROWTH;
        }
        previous_violation = violation;
    }
    let (violation, vars, multipliers) = best.expect("max_outer >= 1 ran at least once");
    SolvedProblem {
        vars,
        multipliers,
        feasible: false,
        outer_iterations: config.max_outer,
        violation,
    }
}

/// Solves vertices and corrected normals for all tuples at once.
pub(crate) fn solve_vertices_optimized(
    cloud: &PointCloud,
    segmentation: &Segmentation,
    tuples: &[QTuple],
    config: &SolverConfig,
) -> SimplifyResult<SolvedVertices> {
    config.validate(segmentation.proxy_count())?;
    let mut corrected: Vec<Vector3<f64>> =
        segmentation.proxies.iter().map(|p| p.normal).collect();
    if tuples.is_empty() {
        return Ok(SolvedVertices {
            vertices: Vec::new(),
            vertex_tuples: Vec::new(),
            corrected_normals: Some(corrected),
            feasible: true,
            warnings: Vec::new(),
        });
    }
    let centers = segmentation
        .proxies
        .iter()
        .map(|p| p.plane(cloud).0)
        .collect();
    let wtilde = (0..segmentation.proxy_count())
        .map(|i| config.wtilde.get(i))
        .collect();
    let problem = ConstrainedProblem::new(centers, corrected.clone(), wtilde, tuples.to_vec())?;
    let solved = minimize_constrained(&problem, config);
    for (slot, &i) in problem.active_proxies().iter().enumerate() {
        corrected[i] = problem.corrected_normal(&solved.vars, slot);
    }
    let vertices = (0..tuples.len())
        .map(|j| problem.vertex(&solved.vars, j))
        .collect();
    Ok(SolvedVertices {
        vertices,
        vertex_tuples: tuples.to_vec(),
        corrected_normals: Some(corrected),
        feasible: solved.feasible,
        warnings: Vec::new(),
    })
}

/// Limited-memory BFGS with Armijo backtracking, minimizing the augmented
/// Lagrangian at fixed multipliers. Updates `vars` in place.
fn lbfgs_minimize(
    problem: &ConstrainedProblem,
    m: &Multipliers,
    vars: &mut Vec<f64>,
    step_tol: f64,
) {
    let n = vars.len();
    let mut value = problem.augmented_value(vars, m);
    let mut grad = problem.augmented_gradient(vars, m);
    let mut history: VecDeque<(Vec<f64>, Vec<f64>, f64)> = VecDeque::new();

    for _ in 0..MAX_INNER_ITERATIONS {
        let grad_norm = infinity_norm(&grad);
        if grad_norm <= GRADIENT_TOL * (1.0 + value.abs()) {
            break;
        }

        // Two-loop recursion: apply the inverse-Hessian estimate to the
        // gradient, then negate for a descent direction.
        let mut q = grad.clone();
        let mut alphas = vec![0.0; history.len()];
        for (idx, (s, y, rho)) in history.iter().enumerate().rev() {
            let alpha = rho * dot(s, &q);
            alphas[idx] = alpha;
            for t in 0..n {
                q[t] -= alpha * y[t];
            }
        }
        if let Some((s, y, _)) = history.back() {
            let gamma = dot(s, y) / dot(y, y);
            for entry in q.iter_mut() {
                *entry *= gamma;
            }
        }
        for (idx, (s, y, rho)) in history.iter().enumerate() {
            let beta = rho * dot(y, &q);
            for t in 0..n {
                q[t] += (alphas[idx] - beta) * s[t];
            }
        }
        let mut direction: Vec<f64> = q.iter().map(|v| -v).collect();
        let mut slope = dot(&grad, &direction);
        if slope >= 0.0 {
            // The curvature estimate turned the step uphill; fall back to
            // steepest descent and forget the history.
            history.clear();
            direction = grad.iter().map(|g| -g).collect();
            slope = -dot(&grad, &grad);
        }

        let mut step = if history.is_empty() {
            (1.0 / grad_norm).min(1.0)
        } else {
            1.0
        };
        let mut accepted = None;
        for _ in 0..MAX_BACKTRACKS {
            let candidate: Vec<f64> = vars
                .iter()
                .zip(&direction)
                .map(|(v, d)| v + step * d)
                .collect();
            let candidate_value = problem.augmented_value(&candidate, m);
            if candidate_value <= value + ARMIJO_SLOPE * step * slope {
                accepted = Some((candidate, candidate_value));
                break;
            }
            step *= BACKTRACK_FACTOR;
        }
        let Some((candidate, candidate_value)) = accepted else {
            break;
        };

        let new_grad = problem.augmented_gradient(&candidate, m);
        let s: Vec<f64> = candidate.iter().zip(vars.iter()).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = new_grad.iter().zip(grad.iter()).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-12 * euclidean_norm(&s) * euclidean_norm(&y) {
            if history.len() == LBFGS_HISTORY {
                history.pop_front();
            }
            history.push_back((s.clone(), y, 1.0 / sy));
        }
        *vars = candidate;
        value = candidate_value;
        grad = new_grad;
        if euclidean_norm(&s) < step_tol {
            break;
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

fn euclidean_norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn infinity_norm(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |acc: f64, v| acc.max(v.abs()))
}
