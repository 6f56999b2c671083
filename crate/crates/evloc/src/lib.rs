//! Optimization toolkit for electric-vehicle charger placement.
//!
//! The library models charger placement as a capacitated facility-location
//! problem with an equity penalty and pluggable extension terms, and ships
//! the machinery around it:
//!
//! - [`instance`]: domain types (facilities, customers, regions, solutions).
//! - [`spatial`]: reproducible instance generation on a Poisson point
//!   process.
//! - [`objective`]: objective evaluation (transport, sunken, Gini equity,
//!   extensions) and feasibility checking.
//! - [`lp`]: a dense two-phase simplex, the fixed-open-set assignment
//!   subproblem, and LP relaxation bounds.
//! - [`bnb`]: exact branch-and-bound for the linear model, plus the
//!   exhaustive small-instance oracle.
//! - [`solvers`]: black-box minimization (simulated annealing, genetic
//!   algorithm, particle swarm, pattern search) and the annealing solver
//!   for the full nonlinear model.
//! - [`rastrigin`]: the multimodal benchmark function and the cross-solver
//!   comparison harness.
//! - [`tsp`]: closed-route minimization over charger locations by
//!   annealing, with a factorial oracle.
//! - [`files`] and [`render`]: versioned JSON instance/solution files and
//!   SVG maps.
//!
//! Every stochastic component is seeded and deterministic; see the
//! `examples/` directory for one runnable program per capability.

// Indexed loops are clearer for the matrix and tableau arithmetic here.
#![allow(clippy::needless_range_loop)]

pub mod bnb;
pub mod cli;
pub mod files;
pub mod instance;
pub mod lp;
pub mod objective;
pub mod rastrigin;
pub mod render;
pub mod rng;
pub mod solvers;
pub mod spatial;
pub mod tsp;

pub use bnb::{brute_force, solve_exact, BnbConfig, BnbReport, BranchRule, SolveError};
pub use instance::{distance, Customer, Facility, FlpInstance, FlpSolution, Point2D, Region};
pub use objective::{
    check_feasible, equity_penalty, evaluate, gini, ExtensionTerm, ModelConfig,
    ObjectiveBreakdown, ServiceMode,
};
pub use rng::RngStream;
pub use solvers::{
    flp_anneal, genetic_algorithm, particle_swarm, pattern_search, simulated_annealing,
    Acceptance, AnnealSchedule, BlackBox, BoxedProblem, Continuous, ContinuousNeighborhood,
    Cooling, GaConfig, PatternConfig, PsoConfig, RunTrace,
};
pub use spatial::{generate_instance, sample_ppp, CountMode, CostRange, CostRanges, GenConfig};
pub use tsp::{tour_length, tsp_anneal, tsp_brute_force, Tour, TspInstance, TspNeighbor};
