//! The Rastrigin benchmark function and the cross-solver comparison
//! harness.
//!
//! `f(x) = A n + sum_i (x_i^2 - A cos(2 pi x_i))` with `A = 10` on
//! `[-5.12, 5.12]^n` is a separable, highly multimodal standard test
//! function: the global minimum is 0 at the origin and local minima sit
//! near the integer lattice. [`local_min_lattice`] computes the achievable
//! local-minimum values exactly, which lets the harness classify where a
//! stochastic solver stalled.

use std::time::Instant;

use crate::solvers::{
    genetic_algorithm, particle_swarm, pattern_search, simulated_annealing, AnnealSchedule,
    Continuous, ContinuousNeighborhood, Cooling, GaConfig, PatternConfig, PsoConfig, RunTrace,
};

pub const RASTRIGIN_A: f64 = 10.0;
pub const RASTRIGIN_BOUND: f64 = 5.12;

/// Benchmark problem: dimension, amplitude, and per-coordinate bounds.
#[derive(Debug, Clone)]
pub struct RastriginProblem {
    pub dimension: usize,
    pub amplitude: f64,
    bounds: Vec<(f64, f64)>,
}

impl RastriginProblem {
    pub fn new(dimension: usize) -> Self {
        assert!(dimension >= 1);
        Self {
            dimension,
            amplitude: RASTRIGIN_A,
            bounds: vec![(-RASTRIGIN_BOUND, RASTRIGIN_BOUND); dimension],
        }
    }

    /// Overrides the standard box bounds.
    pub fn with_bounds(mut self, lo: f64, hi: f64) -> Self {
        assert!(lo < hi);
        self.bounds = vec![(lo, hi); self.dimension];
        self
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        rastrigin_with(x, self.amplitude)
    }
}

impl Continuous for RastriginProblem {
    fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }

    fn energy(&self, x: &[f64]) -> f64 {
        self.value(x)
    }
}

/// Standard form with `A = 10`.
pub fn rastrigin(x: &[f64]) -> f64 {
    rastrigin_with(x, RASTRIGIN_A)
}

pub fn rastrigin_with(x: &[f64], a: f64) -> f64 {
    let n = x.len() as f64;
    a * n
        + x.iter()
            .map(|&xi| xi * xi - a * (2.0 * std::f64::consts::PI * xi).cos())
            .sum::<f64>()
}

/// Value of the one-dimensional local minimum near integer `m`, located by
/// bisection on the derivative `2x + 2 pi A sin(2 pi x)` over
/// `[m - 0.25, m]`.
pub fn lattice_minimum(m: usize) -> f64 {
    if m == 0 {
        return 0.0;
    }
    let a = RASTRIGIN_A;
    let g = |x: f64| x * x - a * (2.0 * std::f64::consts::PI * x).cos() + a;
    let dg = |x: f64| 2.0 * x + 2.0 * std::f64::consts::PI * a * (2.0 * std::f64::consts::PI * x).sin();
    let mut lo = m as f64 - 0.25;
    let mut hi = m as f64;
    debug_assert!(dg(lo) < 0.0 && dg(hi) > 0.0, "minimum not bracketed for m = {m}");
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if dg(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    g(0.5 * (lo + hi))
}

/// All function values achievable at local minima whose coordinates sit in
/// lattice cells `|m_i| <= max_index`, deduplicated within 1e-6 and sorted.
pub fn local_min_lattice(n: usize, max_index: usize) -> Vec<f64> {
    let cell_values: Vec<f64> = (0..=max_index).map(lattice_minimum).collect();
    let mut sums = Vec::new();
    // Enumerate multiplicity vectors over the cell values.
    fn assign(cells: &[f64], remaining: usize, acc: f64, out: &mut Vec<f64>) {
        if cells.len() == 1 {
            out.push(acc + remaining as f64 * cells[0]);
            return;
        }
        for count in 0..=remaining {
            assign(
                &cells[1..],
                remaining - count,
                acc + count as f64 * cells[0],
                out,
            );
        }
    }
    assign(&cell_values, n, 0.0, &mut sums);
    sums.sort_by(|a, b| a.partial_cmp(b).unwrap());
    sums.dedup_by(|a, b| (*a - *b).abs() <= 1e-6);
    sums
}

/// Distance from `value` to the nearest lattice level.
pub fn lattice_distance(value: f64, lattice: &[f64]) -> f64 {
    lattice
        .iter()
        .map(|l| (value - l).abs())
        .fold(f64::INFINITY, f64::min)
}

/// A solver that can enter the comparison harness. The slot is open:
/// external solvers plug in by implementing this trait.
pub trait BenchSolver {
    fn name(&self) -> &str;
    fn run(&self, problem: &RastriginProblem, budget: usize, seed: u64) -> RunTrace<Vec<f64>>;
}

/// Annealer entry. Uses geometric cooling with a deep quench and the
/// temperature-scaled single-coordinate Gaussian neighborhood; stalls land
/// on the local-minimum lattice the way a quench should.
pub struct SaBench {
    pub cooling: Cooling,
}

impl Default for SaBench {
    fn default() -> Self {
        Self {
            cooling: Cooling::Geometric { t_end: 1e-4 },
        }
    }
}

impl BenchSolver for SaBench {
    fn name(&self) -> &str {
        "sa"
    }

    fn run(&self, problem: &RastriginProblem, budget: usize, seed: u64) -> RunTrace<Vec<f64>> {
        let hood = ContinuousNeighborhood::new(problem);
        let mut schedule = AnnealSchedule {
            cooling: self.cooling,
            ..AnnealSchedule::default()
        };
        schedule.k_max = schedule.k_max_for_budget(budget);
        simulated_annealing(&hood, &schedule, seed)
    }
}

#[derive(Default)]
pub struct PsoBench {
    pub overrides: Option<PsoConfig>,
}

impl BenchSolver for PsoBench {
    fn name(&self) -> &str {
        "pso"
    }

    fn run(&self, problem: &RastriginProblem, budget: usize, seed: u64) -> RunTrace<Vec<f64>> {
        let mut cfg = self.overrides.unwrap_or_default();
        cfg.max_evaluations = budget;
        particle_swarm(problem, &cfg, seed)
    }
}

#[derive(Default)]
pub struct GaBench {
    pub overrides: Option<GaConfig>,
}

impl BenchSolver for GaBench {
    fn name(&self) -> &str {
        "ga"
    }

    fn run(&self, problem: &RastriginProblem, budget: usize, seed: u64) -> RunTrace<Vec<f64>> {
        let mut cfg = self.overrides.unwrap_or_default();
        cfg.max_evaluations = budget;
        genetic_algorithm(problem, &cfg, seed)
    }
}

/// Pattern-search entry. The default start sits inside the central basin
/// (all coordinates 0.25); being derivative-free and deterministic, its
/// rows are identical across seeds.
#[derive(Default)]
pub struct PatternSearchBench {
    pub start: Option<Vec<f64>>,
}

impl BenchSolver for PatternSearchBench {
    fn name(&self) -> &str {
        "patternsearch"
    }

    fn run(&self, problem: &RastriginProblem, budget: usize, _seed: u64) -> RunTrace<Vec<f64>> {
        let start = self
            .start
            .clone()
            .unwrap_or_else(|| vec![0.25; problem.dimension]);
        let cfg = PatternConfig {
            max_evaluations: budget,
            ..PatternConfig::default()
        };
        pattern_search(problem, &cfg, &start)
    }
}

/// Built-in solver lookup for the CLI names `sa`, `pso`, `ga`,
/// `patternsearch`.
pub fn solver_by_name(name: &str) -> Option<Box<dyn BenchSolver>> {
    match name {
        "sa" => Some(Box::new(SaBench::default())),
        "pso" => Some(Box::new(PsoBench::default())),
        "ga" => Some(Box::new(GaBench::default())),
        "patternsearch" => Some(Box::new(PatternSearchBench::default())),
        _ => None,
    }
}

/// One solver-seed run in the report.
#[derive(Debug, Clone)]
pub struct BenchRow {
    pub solver: String,
    pub seed: u64,
    pub point: Vec<f64>,
    pub objective: f64,
    pub iterations: usize,
    pub wall_ms: f64,
}

/// Median/min/max of the final objective per solver.
#[derive(Debug, Clone)]
pub struct BenchAggregate {
    pub solver: String,
    pub median: f64,
    pub min: f64,
    pub max: f64,
}

#[derive(Debug, Clone)]
pub struct BenchReport {
    pub dimension: usize,
    pub budget: usize,
    pub rows: Vec<BenchRow>,
    pub aggregates: Vec<BenchAggregate>,
}

/// Runs every solver on every seed and assembles the report, rows sorted by
/// solver name then seed. Wall time is informational; every other column is
/// deterministic.
pub fn run_bench(
    solvers: &[Box<dyn BenchSolver>],
    dimension: usize,
    budget: usize,
    seeds: &[u64],
) -> BenchReport {
    let problem = RastriginProblem::new(dimension);
    let mut rows = Vec::with_capacity(solvers.len() * seeds.len());
    for solver in solvers {
        for &seed in seeds {
            let started = Instant::now();
            let trace = solver.run(&problem, budget, seed);
            let wall_ms = started.elapsed().as_secs_f64() * 1e3;
            let objective = problem.value(&trace.best_state);
            debug_assert!((objective - trace.best_energy).abs() <= 1e-12);
            rows.push(BenchRow {
                solver: solver.name().to_string(),
                seed,
                point: trace.best_state,
                objective,
                iterations: trace.evaluations,
                wall_ms,
            });
        }
    }
    rows.sort_by(|a, b| a.solver.cmp(&b.solver).then(a.seed.cmp(&b.seed)));

    let mut aggregates = Vec::new();
    let mut names: Vec<String> = rows.iter().map(|r| r.solver.clone()).collect();
    names.dedup();
    for name in names {
        let mut values: Vec<f64> = rows
            .iter()
            .filter(|r| r.solver == name)
            .map(|r| r.objective)
            .collect();
        values.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let median = if values.len() % 2 == 1 {
            values[values.len() / 2]
        } else {
            0.5 * (values[values.len() / 2 - 1] + values[values.len() / 2])
        };
        aggregates.push(BenchAggregate {
            solver: name,
            median,
            min: values[0],
            max: *values.last().unwrap(),
        });
    }

    BenchReport {
        dimension,
        budget,
        rows,
        aggregates,
    }
}

impl BenchReport {
    /// CSV with columns `solver,seed,x1..xn,objective,iterations,wall_ms`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("solver,seed");
        for d in 1..=self.dimension {
            out.push_str(&format!(",x{d}"));
        }
        out.push_str(",objective,iterations,wall_ms\n");
        for row in &self.rows {
            out.push_str(&format!("{},{}", row.solver, row.seed));
            for v in &row.point {
                out.push_str(&format!(",{v}"));
            }
            out.push_str(&format!(
                ",{},{},{:.3}\n",
                row.objective, row.iterations, row.wall_ms
            ));
        }
        out
    }

    /// Markdown table mirroring the CSV numbers, plus an aggregate block.
    pub fn to_markdown(&self) -> String {
        let mut out = format!(
            "# Solver comparison (dimension {}, budget {} evaluations)\n\n",
            self.dimension, self.budget
        );
        out.push_str("| Solver | Seed |");
        for d in 1..=self.dimension {
            out.push_str(&format!(" x{d} |"));
        }
        out.push_str(" Objective Value | Iterations | Wall (ms) |\n");
        out.push_str("|---|---|");
        for _ in 0..self.dimension {
            out.push_str("---|");
        }
        out.push_str("---|---|---|\n");
        for row in &self.rows {
            out.push_str(&format!("| {} | {} |", row.solver, row.seed));
            for v in &row.point {
                out.push_str(&format!(" {v} |"));
            }
            out.push_str(&format!(
                " {} | {} | {:.3} |\n",
                row.objective, row.iterations, row.wall_ms
            ));
        }
        if !self.aggregates.is_empty() {
            out.push_str("\n## Aggregates over seeds\n\n");
            out.push_str("| Solver | Median | Min | Max |\n|---|---|---|---|\n");
            for a in &self.aggregates {
                out.push_str(&format!(
                    "| {} | {} | {} | {} |\n",
                    a.solver, a.median, a.min, a.max
                ));
            }
        }
        out.push_str(
            "\nNot included: an integer-linear-programming row (an ILP solver is not a \
             meaningful minimizer for this nonconvex function) and surrogate optimization \
             (no open implementation bundled; external solvers can plug into the harness).\n",
        );
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_at_origin() {
        assert_eq!(rastrigin(&[0.0; 10]), 0.0);
    }

    #[test]
    fn bounds_default_and_override() {
        let p = RastriginProblem::new(3);
        assert_eq!(p.bounds(), &[(-5.12, 5.12); 3]);
        let wide = RastriginProblem::new(3).with_bounds(-10.0, 10.0);
        assert_eq!(wide.bounds(), &[(-10.0, 10.0); 3]);
    }

    #[test]
    fn unit_offset_value() {
        // A*10 + (1 - A) + 9 * (-A) = 100 + 1 - 10 - 90 = 1
        let mut x = [0.0; 10];
        x[0] = 1.0;
        assert!((rastrigin(&x) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn near_integer_two_evaluates_to_the_reported_stall_value() {
        let mut x = [0.0; 10];
        x[1] = -1.99;
        assert!((rastrigin(&x) - 3.9798).abs() < 5e-4);
    }

    #[test]
    fn lattice_values_match_bisection() {
        assert_eq!(lattice_minimum(0), 0.0);
        assert!((lattice_minimum(1) - 0.9950).abs() < 5e-4);
        assert!((lattice_minimum(2) - 3.9798).abs() < 5e-4);
    }

    #[test]
    fn lattice_sums_are_sorted_and_deduplicated() {
        let lattice = local_min_lattice(3, 2);
        assert_eq!(lattice[0], 0.0);
        assert!(lattice.windows(2).all(|w| w[1] > w[0] + 1e-7));
        // 3 coordinates, each in {l0, l1, l2}: multiset sums
        let l1 = lattice_minimum(1);
        assert!(lattice.iter().any(|v| (v - 3.0 * l1).abs() < 1e-9));
    }

    #[test]
    fn symmetry_and_permutation_invariance() {
        use crate::rng::RngStream;
        let mut rng = RngStream::from_seed(15);
        for _ in 0..200 {
            let x: Vec<f64> = (0..6).map(|_| rng.uniform(-5.12, 5.12)).collect();
            let neg: Vec<f64> = x.iter().map(|v| -v).collect();
            assert!((rastrigin(&x) - rastrigin(&neg)).abs() < 1e-9);
            let mut perm = x.clone();
            let i = rng.index(6);
            let j = rng.index(6);
            perm.swap(i, j);
            assert!((rastrigin(&x) - rastrigin(&perm)).abs() < 1e-9);
        }
    }

    #[test]
    fn nonnegative_on_a_dense_grid() {
        for k in 0..=10_240 {
            let x = -5.12 + k as f64 * 0.001;
            let v = rastrigin(&[x]);
            assert!(v >= 0.0, "f({x}) = {v}");
            if x != 0.0 {
                assert!(v > 0.0);
            }
        }
    }

    #[test]
    fn empty_seed_list_gives_header_only_report() {
        let solvers = vec![solver_by_name("patternsearch").unwrap()];
        let report = run_bench(&solvers, 4, 500, &[]);
        assert!(report.rows.is_empty());
        assert!(report.aggregates.is_empty());
        assert_eq!(report.to_csv().lines().count(), 1);
    }

    #[test]
    fn rows_are_reevaluation_consistent_and_sorted() {
        let solvers: Vec<Box<dyn BenchSolver>> = vec![
            solver_by_name("pso").unwrap(),
            solver_by_name("ga").unwrap(),
            solver_by_name("sa").unwrap(),
            solver_by_name("patternsearch").unwrap(),
        ];
        let seeds = [3u64, 1u64];
        let report = run_bench(&solvers, 4, 800, &seeds);
        assert_eq!(report.rows.len(), 8);
        let names: Vec<&str> = report.rows.iter().map(|r| r.solver.as_str()).collect();
        let mut sorted = names.clone();
        sorted.sort();
        assert_eq!(names, sorted);
        for row in &report.rows {
            assert!((rastrigin(&row.point) - row.objective).abs() <= 1e-12);
            assert!(row.iterations <= 800);
        }
        // seeds sorted within a solver
        assert!(report.rows[0].seed < report.rows[1].seed);
    }

    #[test]
    fn unknown_solver_name_is_none() {
        assert!(solver_by_name("surrogate").is_none());
    }

    #[test]
    fn csv_and_markdown_carry_identical_numbers() {
        let solvers = vec![solver_by_name("patternsearch").unwrap()];
        let report = run_bench(&solvers, 3, 400, &[0, 1]);
        let csv = report.to_csv();
        let md = report.to_markdown();
        for row in &report.rows {
            for v in &row.point {
                let formatted = format!("{v}");
                assert!(csv.contains(&formatted));
                assert!(md.contains(&formatted));
            }
            let obj = format!("{}", row.objective);
            assert!(csv.contains(&obj) && md.contains(&obj));
        }
    }
}
