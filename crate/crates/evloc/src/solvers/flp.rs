//! Annealing solver for the full placement model, including equity and
//! extension terms the exact path refuses.
//!
//! The state is the open-set bit vector; a move flips one facility. The
//! energy of a state is the full objective with the transport-optimal
//! assignment for that open set; open sets that cannot satisfy the service
//! mode get infinite energy. Energies are memoized per open set since the
//! walk revisits states heavily.

use std::cell::RefCell;
use std::collections::HashMap;

use super::{simulated_annealing, AnnealSchedule, BlackBox, RunTrace};
use crate::bnb::{BnbReport, SolveError};
use crate::instance::FlpInstance;
use crate::lp::assign_for_open_set;
use crate::objective::{evaluate, ModelConfig};
use crate::rng::RngStream;

struct OpenSetProblem<'a> {
    inst: &'a FlpInstance,
    cfg: &'a ModelConfig,
    cache: RefCell<HashMap<Vec<bool>, f64>>,
}

impl OpenSetProblem<'_> {
    fn raw_energy(&self, open: &[bool]) -> f64 {
        match assign_for_open_set(self.inst, self.cfg, open) {
            None => f64::INFINITY,
            Some(assignment) => evaluate(self.inst, self.cfg, open, &assignment.assign)
                .expect("LP assignment is within range")
                .total,
        }
    }
}

impl BlackBox for OpenSetProblem<'_> {
    type State = Vec<bool>;

    fn random_state(&self, rng: &mut RngStream) -> Vec<bool> {
        (0..self.inst.facility_count())
            .map(|_| rng.unit() < 0.5)
            .collect()
    }

    fn energy(&self, state: &Vec<bool>) -> f64 {
        if let Some(&e) = self.cache.borrow().get(state) {
            return e;
        }
        let e = self.raw_energy(state);
        self.cache.borrow_mut().insert(state.clone(), e);
        e
    }

    fn neighbor(&self, state: &Vec<bool>, _temperature: f64, rng: &mut RngStream) -> Vec<bool> {
        let mut next = state.clone();
        let i = rng.index(next.len());
        next[i] = !next[i];
        next
    }
}

/// Anneals over open sets. Handles any model configuration, including
/// equity weights and extension terms. Never proves optimality; the report
/// carries the best feasible solution found.
pub fn flp_anneal(
    inst: &FlpInstance,
    cfg: &ModelConfig,
    schedule: &AnnealSchedule,
    seed: u64,
) -> Result<(BnbReport, RunTrace<Vec<bool>>), SolveError> {
    let violations = inst.validate();
    if !violations.is_empty() {
        return Err(SolveError::InvalidInstance(violations));
    }

    let problem = OpenSetProblem {
        inst,
        cfg,
        cache: RefCell::new(HashMap::new()),
    };
    let trace = simulated_annealing(&problem, schedule, seed);

    if !trace.best_energy.is_finite() {
        return Err(SolveError::NoIncumbent {
            reason: "no feasible open set was visited during the walk".to_string(),
        });
    }

    let assignment = assign_for_open_set(inst, cfg, &trace.best_state)
        .expect("best state had finite energy, so it is feasible");
    let breakdown = evaluate(inst, cfg, &trace.best_state, &assignment.assign)
        .expect("assignment from the LP is in range");
    let solution = breakdown.into_solution(
        trace.best_state.clone(),
        assignment.assign,
        cfg.equity_weight,
    );

    let report = BnbReport {
        solution,
        proven_optimal: false,
        nodes_explored: trace.evaluations,
        best_bound: f64::NEG_INFINITY,
    };
    Ok((report, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bnb::brute_force;
    use crate::instance::{Customer, Facility, Point2D, Region};
    use crate::objective::ServiceMode;
    use crate::spatial::{generate_instance, CostRange, GenConfig};

    fn small(n: usize, m: usize, seed: u64) -> FlpInstance {
        let mut cfg = GenConfig::fixed_counts(Region::new(0.0, 100.0, 0.0, 100.0), n, m, seed);
        let per_facility = 3.5 * m as f64 / n as f64;
        cfg.cost_ranges.demand = CostRange::new(1.0, 6.0);
        cfg.cost_ranges.capacity = CostRange::new(1.2 * per_facility, 2.4 * per_facility);
        cfg.cost_ranges.sunken_cost = CostRange::new(0.0, 80.0);
        generate_instance(&cfg).unwrap()
    }

    #[test]
    fn single_facility_space_is_solved() {
        let inst = FlpInstance {
            region: Region::new(0.0, 10.0, 0.0, 10.0),
            facilities: vec![Facility {
                id: 0,
                location: Point2D::new(0.0, 0.0),
                sunken_cost: 2.0,
                capacity: 5.0,
            }],
            customers: vec![Customer {
                id: 0,
                location: Point2D::new(3.0, 4.0),
                demand: 1.0,
            }],
            variable_cost: vec![vec![1.0]],
            min_capacity: 0.0,
            equity_weight: 0.0,
            extension_terms: Vec::new(),
        };
        let cfg = ModelConfig::linear();
        let schedule = AnnealSchedule::default().with_k_max(100);
        let (report, trace) = flp_anneal(&inst, &cfg, &schedule, 4).unwrap();
        assert_eq!(report.solution.open, vec![true]);
        assert!((report.solution.objective_total - 7.0).abs() < 1e-9);
        assert!(!report.proven_optimal);
        assert!(trace.is_non_increasing());
    }

    #[test]
    fn matches_brute_force_on_most_seeds() {
        let mut agree = 0;
        let total = 20;
        for seed in 0..total {
            let inst = small(4, 5, 300 + seed);
            let cfg = ModelConfig::linear();
            let schedule = AnnealSchedule::default().with_k_max(400);
            let (report, _) = flp_anneal(&inst, &cfg, &schedule, seed).unwrap();
            let oracle = brute_force(&inst, &cfg).unwrap();
            let scale = oracle.objective_total.abs().max(1.0);
            if (report.solution.objective_total - oracle.objective_total).abs() <= 1e-7 * scale {
                agree += 1;
            }
        }
        assert!(agree * 100 >= total * 95, "only {agree}/{total} matched");
    }

    #[test]
    fn equity_weight_never_worsens_equity() {
        for seed in 0..10u64 {
            let inst = small(4, 6, 800 + seed);
            let schedule = AnnealSchedule::default().with_k_max(2_000);
            let base = ModelConfig::linear().with_service_mode(ServiceMode::Partial);
            let weighted = base.clone().with_equity_weight(1e4);
            let (lo, _) = flp_anneal(&inst, &base, &schedule, seed).unwrap();
            let (hi, _) = flp_anneal(&inst, &weighted, &schedule, seed).unwrap();
            let gini_of = |r: &BnbReport| {
                crate::objective::equity_penalty(&inst, &r.solution.assign)
            };
            assert!(
                gini_of(&hi) <= gini_of(&lo) + 1e-12,
                "seed {seed}: equity rose from {} to {}",
                gini_of(&lo),
                gini_of(&hi)
            );
        }
    }

    #[test]
    fn infeasible_everywhere_reports_no_incumbent() {
        let inst = FlpInstance {
            region: Region::new(0.0, 10.0, 0.0, 10.0),
            facilities: vec![Facility {
                id: 0,
                location: Point2D::new(0.0, 0.0),
                sunken_cost: 2.0,
                capacity: 5.0,
            }],
            customers: vec![Customer {
                id: 0,
                location: Point2D::new(3.0, 4.0),
                demand: 50.0,
            }],
            variable_cost: vec![vec![1.0]],
            min_capacity: 0.0,
            equity_weight: 0.0,
            extension_terms: Vec::new(),
        };
        let cfg = ModelConfig::linear(); // full service, unmeetable demand
        let schedule = AnnealSchedule::default().with_k_max(50);
        match flp_anneal(&inst, &cfg, &schedule, 1) {
            Err(SolveError::NoIncumbent { .. }) => {}
            other => panic!("expected no incumbent, got {other:?}"),
        }
    }
}
