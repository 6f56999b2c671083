//! Exact solver for the linear placement model (transport + sunken cost
//! with the capacity band) by branch-and-bound on the open/close binaries.
//!
//! Nodes are explored best-bound-first with LP relaxation bounds from
//! [`crate::lp::lp_bound`]; branching picks the most fractional indicator.
//! Ties everywhere break deterministically (node creation order, lowest
//! index), so a given instance and configuration always produce the same
//! report. Nonlinear objective terms (equity, extensions) are refused:
//! those models route to the annealing path instead.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::time::{Duration, Instant};

use crate::instance::{FlpInstance, FlpSolution, Violation};
use crate::lp::{assign_for_open_set, lp_bound};
use crate::objective::{evaluate, ModelConfig};

/// How the branching variable is chosen among fractional indicators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BranchRule {
    /// Closest to one half, ties by lowest index.
    #[default]
    MostFractional,
    /// Lowest fractional index.
    LowestIndex,
}

#[derive(Debug, Clone)]
pub struct BnbConfig {
    pub node_limit: usize,
    pub time_limit: Duration,
    /// Relative optimality gap at which a node is fathomed.
    pub gap_tolerance: f64,
    pub branching_rule: BranchRule,
}

impl Default for BnbConfig {
    fn default() -> Self {
        Self {
            node_limit: 1_000_000,
            time_limit: Duration::from_secs(300),
            gap_tolerance: 1e-9,
            branching_rule: BranchRule::MostFractional,
        }
    }
}

/// Outcome of an exact or annealing solve.
#[derive(Debug, Clone)]
pub struct BnbReport {
    pub solution: FlpSolution,
    pub proven_optimal: bool,
    pub nodes_explored: usize,
    /// Global lower bound on the optimum at termination. Heuristic paths
    /// that prove nothing report negative infinity.
    pub best_bound: f64,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SolveError {
    #[error("instance is invalid: {0:?}")]
    InvalidInstance(Vec<Violation>),
    #[error("model is infeasible: {reason}")]
    Infeasible { reason: String },
    #[error("exact solver cannot handle nonlinear term '{term}'; use the annealing path")]
    NonlinearModel { term: String },
    #[error("no feasible incumbent found: {reason}")]
    NoIncumbent { reason: String },
    #[error("instance too large for exhaustive enumeration: n = {n} exceeds {limit}")]
    TooLarge { n: usize, limit: usize },
}

fn require_linear(cfg: &ModelConfig) -> Result<(), SolveError> {
    if cfg.equity_weight != 0.0 {
        return Err(SolveError::NonlinearModel {
            term: "equity".to_string(),
        });
    }
    if let Some(term) = cfg.extension_terms.first() {
        return Err(SolveError::NonlinearModel {
            term: term.name.clone(),
        });
    }
    Ok(())
}

fn validated(inst: &FlpInstance) -> Result<(), SolveError> {
    let violations = inst.validate();
    if violations.is_empty() {
        Ok(())
    } else {
        Err(SolveError::InvalidInstance(violations))
    }
}

struct Node {
    bound: f64,
    order: u64,
    fixed: Vec<Option<bool>>,
    open_relaxed: Vec<f64>,
}

// Min-heap by (bound, creation order).
impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.bound == other.bound && self.order == other.order
    }
}
impl Eq for Node {}
impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Node {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .bound
            .partial_cmp(&self.bound)
            .unwrap_or(Ordering::Equal)
            .then(other.order.cmp(&self.order))
    }
}

const INTEGRALITY_TOL: f64 = 1e-7;

fn fractional_branch_var(relaxed: &[f64], fixed: &[Option<bool>], rule: BranchRule) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, &x) in relaxed.iter().enumerate() {
        if fixed[i].is_some() {
            continue;
        }
        let frac_dist = (x - x.round()).abs();
        if frac_dist <= INTEGRALITY_TOL {
            continue;
        }
        match rule {
            BranchRule::LowestIndex => return Some(i),
            BranchRule::MostFractional => {
                let score = (x - 0.5).abs();
                if best.is_none_or(|(_, s)| score < s) {
                    best = Some((i, score));
                }
            }
        }
    }
    best.map(|(i, _)| i)
}

/// Builds the packaged solution for an integer open vector, if feasible.
fn integer_completion(
    inst: &FlpInstance,
    cfg: &ModelConfig,
    open: &[bool],
) -> Option<FlpSolution> {
    let assignment = assign_for_open_set(inst, cfg, open)?;
    let breakdown = evaluate(inst, cfg, open, &assignment.assign)
        .expect("assignment from the LP is in range");
    Some(breakdown.into_solution(open.to_vec(), assignment.assign, cfg.equity_weight))
}

/// Exact branch-and-bound solve of the linear model.
///
/// Requires `equity_weight == 0` and no extension terms; the capacity band
/// and service mode are honored exactly. Returns the optimum (within
/// `gap_tolerance`) or the best incumbent when a limit fires.
pub fn solve_exact(
    inst: &FlpInstance,
    cfg: &ModelConfig,
    bnb: &BnbConfig,
) -> Result<BnbReport, SolveError> {
    validated(inst)?;
    require_linear(cfg)?;
    let n = inst.facility_count();
    let start = Instant::now();

    let root_fixed: Vec<Option<bool>> = vec![None; n];
    let Some(root) = lp_bound(inst, cfg, &root_fixed) else {
        return Err(SolveError::Infeasible {
            reason: relaxation_infeasibility_reason(inst, cfg),
        });
    };

    let mut heap = BinaryHeap::new();
    let mut next_order = 0u64;
    heap.push(Node {
        bound: root.value,
        order: next_order,
        fixed: root_fixed,
        open_relaxed: root.open_relaxed,
    });
    next_order += 1;

    let mut incumbent: Option<FlpSolution> = None;
    let mut nodes_explored = 0usize;
    let mut limit_hit = false;

    while let Some(node) = heap.pop() {
        if nodes_explored >= bnb.node_limit || start.elapsed() >= bnb.time_limit {
            heap.push(node);
            limit_hit = true;
            break;
        }
        nodes_explored += 1;

        if let Some(best) = &incumbent {
            if !improves(node.bound, best.objective_total, bnb.gap_tolerance) {
                continue;
            }
        }

        match fractional_branch_var(&node.open_relaxed, &node.fixed, bnb.branching_rule) {
            None => {
                // Relaxation is integral: evaluate the completion exactly.
                let open: Vec<bool> = node
                    .fixed
                    .iter()
                    .zip(&node.open_relaxed)
                    .map(|(fx, &x)| fx.unwrap_or(x >= 0.5))
                    .collect();
                if let Some(candidate) = integer_completion(inst, cfg, &open) {
                    let better = incumbent
                        .as_ref()
                        .is_none_or(|b| candidate.objective_total < b.objective_total - 1e-12);
                    if better {
                        incumbent = Some(candidate);
                    }
                }
            }
            Some(branch_var) => {
                // Open branch first so index-order ties favor opening the
                // lowest facility.
                for value in [true, false] {
                    let mut fixed = node.fixed.clone();
                    fixed[branch_var] = Some(value);
                    if let Some(child) = lp_bound(inst, cfg, &fixed) {
                        let keep = incumbent.as_ref().is_none_or(|b| {
                            improves(child.value, b.objective_total, bnb.gap_tolerance)
                        });
                        if keep {
                            heap.push(Node {
                                bound: child.value,
                                order: next_order,
                                fixed,
                                open_relaxed: child.open_relaxed,
                            });
                        }
                    }
                    next_order += 1;
                }
            }
        }
    }

    match incumbent {
        Some(solution) => {
            let open_bounds = heap.iter().map(|nd| nd.bound).fold(f64::INFINITY, f64::min);
            let best_bound = if limit_hit {
                open_bounds.min(solution.objective_total)
            } else {
                solution.objective_total
            };
            Ok(BnbReport {
                proven_optimal: !limit_hit,
                nodes_explored,
                best_bound,
                solution,
            })
        }
        None if limit_hit => Err(SolveError::NoIncumbent {
            reason: format!(
                "limits reached after {nodes_explored} nodes with no feasible completion"
            ),
        }),
        None => Err(SolveError::Infeasible {
            reason: "no integer open set satisfies the service mode and capacity band".to_string(),
        }),
    }
}

/// `bound` still allows an improvement over `best` beyond the gap.
fn improves(bound: f64, best: f64, gap: f64) -> bool {
    (best - bound) / best.abs().max(1.0) > gap
}

fn relaxation_infeasibility_reason(inst: &FlpInstance, cfg: &ModelConfig) -> String {
    if matches!(cfg.service_mode, crate::objective::ServiceMode::Full)
        && inst.total_capacity() < inst.total_demand()
    {
        format!(
            "total capacity {} is below total demand {} in full-service mode",
            inst.total_capacity(),
            inst.total_demand()
        )
    } else {
        "the LP relaxation is infeasible".to_string()
    }
}

/// Exhaustive oracle over all `2^n` open sets. Ties break toward the
/// lexicographically smallest open vector. Guarded to `n <= 20`.
pub fn brute_force(inst: &FlpInstance, cfg: &ModelConfig) -> Result<FlpSolution, SolveError> {
    validated(inst)?;
    let n = inst.facility_count();
    const LIMIT: usize = 20;
    if n > LIMIT {
        return Err(SolveError::TooLarge { n, limit: LIMIT });
    }

    let mut best: Option<FlpSolution> = None;
    for mask in 0u32..(1u32 << n) {
        // Bit n-1-i drives facility i, so masks enumerate open vectors in
        // lexicographic order and the first strict optimum wins ties.
        let open: Vec<bool> = (0..n).map(|i| (mask >> (n - 1 - i)) & 1 == 1).collect();
        if let Some(candidate) = integer_completion(inst, cfg, &open) {
            let better = best
                .as_ref()
                .is_none_or(|b| candidate.objective_total < b.objective_total - 1e-12);
            if better {
                best = Some(candidate);
            }
        }
    }
    best.ok_or_else(|| SolveError::Infeasible {
        reason: "every open set violates the service mode or capacity band".to_string(),
    })
}
