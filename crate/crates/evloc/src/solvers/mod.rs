//! Black-box minimization framework shared by the annealer, the population
//! heuristics, and the placement/tour solvers built on them.
//!
//! Iteration accounting is uniform: one energy evaluation is one iteration,
//! so budgets and reported iteration counts are comparable across solvers.

mod anneal;
mod flp;
mod ga;
mod pattern;
mod pso;

pub use anneal::simulated_annealing;
pub use flp::flp_anneal;
pub use ga::{genetic_algorithm, GaConfig};
pub use pattern::{pattern_search, PatternConfig};
pub use pso::{particle_swarm, PsoConfig};

use crate::rng::RngStream;

/// A minimization problem over an arbitrary state space with a neighbor
/// generator. The current temperature is passed to `neighbor` so proposal
/// scales may anneal along with the acceptance rule; discrete problems are
/// free to ignore it.
pub trait BlackBox {
    type State: Clone;

    fn random_state(&self, rng: &mut RngStream) -> Self::State;
    fn energy(&self, state: &Self::State) -> f64;
    fn neighbor(&self, state: &Self::State, temperature: f64, rng: &mut RngStream)
        -> Self::State;
}

/// A minimization problem over a box-bounded real vector.
pub trait Continuous {
    fn bounds(&self) -> &[(f64, f64)];
    fn energy(&self, x: &[f64]) -> f64;

    fn dimension(&self) -> usize {
        self.bounds().len()
    }

    fn random_point(&self, rng: &mut RngStream) -> Vec<f64> {
        self.bounds()
            .iter()
            .map(|&(lo, hi)| rng.uniform(lo, hi))
            .collect()
    }
}

/// Owned objective function over a real vector.
pub type EnergyFn = Box<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// Boxed objective over explicit bounds, for ad-hoc problems.
pub struct BoxedProblem {
    pub bounds: Vec<(f64, f64)>,
    energy_fn: EnergyFn,
}

impl BoxedProblem {
    pub fn new(
        bounds: Vec<(f64, f64)>,
        energy_fn: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            bounds,
            energy_fn: Box::new(energy_fn),
        }
    }
}

impl Continuous for BoxedProblem {
    fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }

    fn energy(&self, x: &[f64]) -> f64 {
        (self.energy_fn)(x)
    }
}

/// Adapter that makes any [`Continuous`] problem annealable: proposals
/// perturb one coordinate by a Gaussian step whose scale follows the
/// current temperature, clamped to `[step_floor_frac, step_cap_frac]` of
/// that coordinate's range, then clip to bounds.
pub struct ContinuousNeighborhood<'a, P: Continuous> {
    pub problem: &'a P,
    pub step_cap_frac: f64,
    pub step_floor_frac: f64,
}

impl<'a, P: Continuous> ContinuousNeighborhood<'a, P> {
    pub fn new(problem: &'a P) -> Self {
        Self {
            problem,
            step_cap_frac: 0.1,
            step_floor_frac: 2e-4,
        }
    }
}

impl<P: Continuous> BlackBox for ContinuousNeighborhood<'_, P> {
    type State = Vec<f64>;

    fn random_state(&self, rng: &mut RngStream) -> Vec<f64> {
        self.problem.random_point(rng)
    }

    fn energy(&self, state: &Vec<f64>) -> f64 {
        self.problem.energy(state)
    }

    fn neighbor(&self, state: &Vec<f64>, temperature: f64, rng: &mut RngStream) -> Vec<f64> {
        let bounds = self.problem.bounds();
        let mut next = state.clone();
        let k = rng.index(bounds.len());
        let (lo, hi) = bounds[k];
        let range = hi - lo;
        let sigma = temperature
            .clamp(self.step_floor_frac * range, self.step_cap_frac * range)
            .max(f64::MIN_POSITIVE);
        next[k] = (next[k] + rng.normal(sigma)).clamp(lo, hi);
        next
    }
}

/// Temperature schedule as a function of the fraction of iterations left.
#[derive(Debug, Clone, Copy)]
pub enum Cooling {
    /// `T = T0 * frac` (the default).
    Linear,
    /// Geometric decay from `T0` down to `t_end` as `frac` goes 1 to 0.
    Geometric { t_end: f64 },
    /// Arbitrary map from `(T0, frac)` to a temperature.
    Custom(fn(f64, f64) -> f64),
}

impl Cooling {
    pub fn temperature(&self, t0: f64, frac: f64) -> f64 {
        match self {
            Cooling::Linear => t0 * frac,
            Cooling::Geometric { t_end } => {
                if t0 <= 0.0 {
                    return 0.0;
                }
                let floor = t_end.max(f64::MIN_POSITIVE).min(t0);
                t0 * (floor / t0).powf(1.0 - frac)
            }
            Cooling::Custom(f) => f(t0, frac),
        }
    }
}

/// Move acceptance probability.
#[derive(Debug, Clone, Copy)]
pub enum Acceptance {
    /// 1 for non-worsening moves, `exp(-(e_new - e_old) / T)` otherwise.
    Metropolis,
    Custom(fn(f64, f64, f64) -> f64),
}

impl Acceptance {
    pub fn probability(&self, e_old: f64, e_new: f64, temperature: f64) -> f64 {
        match self {
            Acceptance::Metropolis => {
                if e_new <= e_old {
                    1.0
                } else if temperature <= 0.0 {
                    0.0
                } else {
                    (-(e_new - e_old) / temperature).exp()
                }
            }
            Acceptance::Custom(f) => f(e_old, e_new, temperature),
        }
    }
}

/// Annealer configuration. With `initial_temp = None` the starting
/// temperature is estimated as the standard deviation of the energy over
/// 100 random states (those evaluations count toward the totals).
#[derive(Debug, Clone, Copy)]
pub struct AnnealSchedule {
    pub k_max: usize,
    pub initial_temp: Option<f64>,
    pub cooling: Cooling,
    pub acceptance: Acceptance,
}

impl Default for AnnealSchedule {
    fn default() -> Self {
        Self {
            k_max: 10_000,
            initial_temp: None,
            cooling: Cooling::Linear,
            acceptance: Acceptance::Metropolis,
        }
    }
}

impl AnnealSchedule {
    pub fn with_k_max(mut self, k_max: usize) -> Self {
        self.k_max = k_max;
        self
    }

    /// Evaluations the annealer will consume: initial state, optional
    /// temperature estimation, then one per loop iteration.
    pub fn evaluation_cost(&self) -> usize {
        1 + if self.initial_temp.is_none() { 100 } else { 0 } + self.k_max
    }

    /// Largest `k_max` fitting an evaluation budget.
    pub fn k_max_for_budget(&self, budget: usize) -> usize {
        let overhead = 1 + if self.initial_temp.is_none() { 100 } else { 0 };
        budget.saturating_sub(overhead)
    }
}

/// Record of one solver run: the best state seen, the final state of the
/// walk, and the best-so-far energy after every evaluation.
#[derive(Debug, Clone)]
pub struct RunTrace<S> {
    pub best_state: S,
    pub best_energy: f64,
    pub final_state: S,
    pub final_energy: f64,
    /// Best-so-far energy per evaluation, starting with the first.
    pub best_by_iteration: Vec<f64>,
    /// Total energy evaluations consumed, including any setup sampling.
    pub evaluations: usize,
    pub seed: u64,
}

impl<S> RunTrace<S> {
    pub fn is_non_increasing(&self) -> bool {
        self.best_by_iteration.windows(2).all(|w| w[1] <= w[0])
    }
}

/// Incremental trace builder shared by the solvers.
pub(crate) struct TraceRecorder {
    best: f64,
    trace: Vec<f64>,
}

impl TraceRecorder {
    pub fn new() -> Self {
        Self {
            best: f64::INFINITY,
            trace: Vec::new(),
        }
    }

    /// Records one evaluation; returns true when it improved the best.
    pub fn record(&mut self, energy: f64) -> bool {
        let improved = energy < self.best;
        if improved {
            self.best = energy;
        }
        self.trace.push(self.best);
        improved
    }

    pub fn best(&self) -> f64 {
        self.best
    }

    pub fn finish(self) -> Vec<f64> {
        self.trace
    }
}
