//! Linear-programming layer: the assignment subproblem for a fixed open
//! set, and the LP relaxation that lower-bounds branch-and-bound nodes.
//!
//! Both build on the dense simplex in [`simplex`]. Tolerances follow the
//! solver: 1e-7 absolute feasibility, 1e-9 relative objective comparisons.

pub mod simplex;

pub use simplex::{solve_lp, LpConstraint, LpProblem, LpResult, LpStatus, Relation};

use crate::instance::FlpInstance;
use crate::objective::{ModelConfig, ServiceMode};

/// Transport-cost-minimal assignment for a fixed open set.
#[derive(Debug, Clone, PartialEq)]
pub struct Assignment {
    /// Full `n x m` fraction matrix; closed facilities' rows are zero.
    pub assign: Vec<Vec<f64>>,
    /// Transport term of the objective for this assignment.
    pub transport_cost: f64,
}

/// Objective coefficient of `y[i][j]`: rate times distance times demand.
fn transport_coeff(inst: &FlpInstance, dist: &[Vec<f64>], i: usize, j: usize) -> f64 {
    inst.variable_cost[i][j] * dist[i][j] * inst.customers[j].demand
}

/// Solves the transportation LP for the given open facilities. Returns
/// `None` when the open set cannot satisfy the service mode and capacity
/// band; infeasibility is a value here, not an error.
pub fn assign_for_open_set(
    inst: &FlpInstance,
    cfg: &ModelConfig,
    open: &[bool],
) -> Option<Assignment> {
    let n = inst.facility_count();
    let m = inst.customer_count();
    assert_eq!(open.len(), n, "open vector must have one entry per facility");

    let open_idx: Vec<usize> = (0..n).filter(|&i| open[i]).collect();
    if open_idx.is_empty() {
        return match cfg.service_mode {
            ServiceMode::Full => None,
            ServiceMode::Partial => Some(Assignment {
                assign: vec![vec![0.0; m]; n],
                transport_cost: 0.0,
            }),
        };
    }

    let dist = inst.distance_matrix();
    let k = open_idx.len();
    let var = |ki: usize, j: usize| ki * m + j;

    let mut objective = vec![0.0; k * m];
    for (ki, &i) in open_idx.iter().enumerate() {
        for j in 0..m {
            objective[var(ki, j)] = transport_coeff(inst, &dist, i, j);
        }
    }
    let mut lp = LpProblem::new(objective);

    for j in 0..m {
        let mut coeffs = vec![0.0; k * m];
        for ki in 0..k {
            coeffs[var(ki, j)] = 1.0;
        }
        let relation = match cfg.service_mode {
            ServiceMode::Full => Relation::Eq,
            ServiceMode::Partial => Relation::Le,
        };
        lp.constrain(coeffs, relation, 1.0);
    }
    for (ki, &i) in open_idx.iter().enumerate() {
        let mut coeffs = vec![0.0; k * m];
        for j in 0..m {
            coeffs[var(ki, j)] = inst.customers[j].demand;
        }
        lp.constrain(coeffs.clone(), Relation::Le, inst.facilities[i].capacity);
        if inst.min_capacity > 0.0 {
            lp.constrain(coeffs, Relation::Ge, inst.min_capacity);
        }
    }

    let result = solve_lp(&lp);
    match result.status {
        LpStatus::Optimal => {
            let mut assign = vec![vec![0.0; m]; n];
            for (ki, &i) in open_idx.iter().enumerate() {
                for j in 0..m {
                    assign[i][j] = result.values[var(ki, j)].clamp(0.0, 1.0);
                }
            }
            let mut transport_cost = 0.0;
            for &i in &open_idx {
                for j in 0..m {
                    transport_cost += transport_coeff(inst, &dist, i, j) * assign[i][j];
                }
            }
            Some(Assignment {
                assign,
                transport_cost,
            })
        }
        LpStatus::Infeasible => None,
        LpStatus::Unbounded => unreachable!("transportation LP has a bounded objective"),
    }
}

/// LP relaxation value at a branch-and-bound node.
#[derive(Debug, Clone, PartialEq)]
pub struct RelaxationBound {
    /// Optimal linear objective (transport + sunken) of the relaxation.
    pub value: f64,
    /// Relaxed open indicators in `[0, 1]`; fixed entries keep their value.
    pub open_relaxed: Vec<f64>,
}

/// Lower bound for the linear objective with some open indicators fixed and
/// the rest relaxed to `[0, 1]`. `None` means the node is infeasible.
///
/// The relaxation keeps the demand rows and the capacity band
/// `C_min x_i <= sum_j d_j y_ij <= C_i x_i`; every integer completion
/// satisfies these, so the bound never exceeds the best completion.
pub fn lp_bound(
    inst: &FlpInstance,
    cfg: &ModelConfig,
    fixed: &[Option<bool>],
) -> Option<RelaxationBound> {
    let n = inst.facility_count();
    let m = inst.customer_count();
    assert_eq!(fixed.len(), n, "one fixed/free entry per facility");

    let dist = inst.distance_matrix();
    let x_var = |i: usize| i;
    let y_var = |i: usize, j: usize| n + i * m + j;

    let mut objective = vec![0.0; n + n * m];
    for i in 0..n {
        objective[x_var(i)] = inst.facilities[i].sunken_cost;
        for j in 0..m {
            objective[y_var(i, j)] = transport_coeff(inst, &dist, i, j);
        }
    }
    let mut lp = LpProblem::new(objective);
    for i in 0..n {
        match fixed[i] {
            Some(true) => lp.set_bounds(x_var(i), 1.0, 1.0),
            Some(false) => lp.set_bounds(x_var(i), 0.0, 0.0),
            None => lp.set_bounds(x_var(i), 0.0, 1.0),
        }
    }

    for j in 0..m {
        let mut coeffs = vec![0.0; n + n * m];
        for i in 0..n {
            coeffs[y_var(i, j)] = 1.0;
        }
        let relation = match cfg.service_mode {
            ServiceMode::Full => Relation::Eq,
            ServiceMode::Partial => Relation::Le,
        };
        lp.constrain(coeffs, relation, 1.0);
    }
    for i in 0..n {
        let mut upper = vec![0.0; n + n * m];
        upper[x_var(i)] = -inst.facilities[i].capacity;
        for j in 0..m {
            upper[y_var(i, j)] = inst.customers[j].demand;
        }
        lp.constrain(upper, Relation::Le, 0.0);
        if inst.min_capacity > 0.0 {
            let mut lower = vec![0.0; n + n * m];
            lower[x_var(i)] = inst.min_capacity;
            for j in 0..m {
                lower[y_var(i, j)] = -inst.customers[j].demand;
            }
            lp.constrain(lower, Relation::Le, 0.0);
        }
    }

    let result = solve_lp(&lp);
    match result.status {
        LpStatus::Optimal => Some(RelaxationBound {
            value: result.objective,
            open_relaxed: (0..n).map(|i| result.values[x_var(i)].clamp(0.0, 1.0)).collect(),
        }),
        LpStatus::Infeasible => None,
        LpStatus::Unbounded => unreachable!("relaxation objective is bounded below by 0"),
    }
}
