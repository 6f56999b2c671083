//! Generational genetic algorithm over box-bounded real vectors:
//! tournament selection, arithmetic (blend) crossover, Gaussian mutation
//! clipped to bounds, elitism of one.

use super::{Continuous, RunTrace, TraceRecorder};
use crate::rng::RngStream;

#[derive(Debug, Clone, Copy)]
pub struct GaConfig {
    pub population: usize,
    pub tournament_size: usize,
    pub crossover_rate: f64,
    /// Per-gene probability of adding Gaussian noise.
    pub mutation_rate: f64,
    /// Mutation sigma as a fraction of each coordinate's range.
    pub mutation_sigma_frac: f64,
    pub elitism: usize,
    pub max_evaluations: usize,
}

impl Default for GaConfig {
    fn default() -> Self {
        Self {
            population: 50,
            tournament_size: 4,
            crossover_rate: 0.9,
            mutation_rate: 0.07,
            mutation_sigma_frac: 0.1,
            elitism: 1,
            max_evaluations: 10_000,
        }
    }
}

/// Runs the GA until the evaluation budget is spent. Deterministic in
/// `seed`. Degenerate bounds (`lo == hi`) are legal; every individual is
/// identical in such a coordinate.
pub fn genetic_algorithm<P: Continuous>(
    problem: &P,
    cfg: &GaConfig,
    seed: u64,
) -> RunTrace<Vec<f64>> {
    assert!(cfg.population >= 2, "population must be at least 2");
    assert!(cfg.tournament_size >= 1);
    assert!(cfg.elitism < cfg.population);

    let bounds = problem.bounds().to_vec();
    let dim = bounds.len();
    let mut rng = RngStream::from_seed(seed);
    let mut recorder = TraceRecorder::new();

    let mut population: Vec<Vec<f64>> = Vec::with_capacity(cfg.population);
    let mut fitness: Vec<f64> = Vec::with_capacity(cfg.population);
    let mut best_state: Vec<f64> = Vec::new();
    let mut evaluations = 0usize;

    for _ in 0..cfg.population.min(cfg.max_evaluations.max(1)) {
        let candidate = problem.random_point(&mut rng);
        let energy = problem.energy(&candidate);
        evaluations += 1;
        if recorder.record(energy) {
            best_state = candidate.clone();
        }
        population.push(candidate);
        fitness.push(energy);
        if evaluations >= cfg.max_evaluations {
            break;
        }
    }

    let tournament = |fit: &[f64], rng: &mut RngStream| -> usize {
        let mut winner = rng.index(fit.len());
        for _ in 1..cfg.tournament_size {
            let challenger = rng.index(fit.len());
            if fit[challenger] < fit[winner] {
                winner = challenger;
            }
        }
        winner
    };

    while evaluations < cfg.max_evaluations {
        let mut next_pop: Vec<Vec<f64>> = Vec::with_capacity(population.len());
        let mut next_fit: Vec<f64> = Vec::with_capacity(population.len());

        // Elites carry over without re-evaluation.
        let mut order: Vec<usize> = (0..population.len()).collect();
        order.sort_by(|&a, &b| fitness[a].partial_cmp(&fitness[b]).unwrap().then(a.cmp(&b)));
        for &e in order.iter().take(cfg.elitism) {
            next_pop.push(population[e].clone());
            next_fit.push(fitness[e]);
        }

        while next_pop.len() < population.len() && evaluations < cfg.max_evaluations {
            let a = &population[tournament(&fitness, &mut rng)];
            let b = &population[tournament(&fitness, &mut rng)];
            let mut child: Vec<f64> = if rng.unit() < cfg.crossover_rate {
                // Blend crossover: per-gene convex combination.
                (0..dim)
                    .map(|g| {
                        let u = rng.unit();
                        u * a[g] + (1.0 - u) * b[g]
                    })
                    .collect()
            } else {
                a.clone()
            };
            for (g, value) in child.iter_mut().enumerate() {
                if rng.unit() < cfg.mutation_rate {
                    let (lo, hi) = bounds[g];
                    let sigma = cfg.mutation_sigma_frac * (hi - lo);
                    if sigma > 0.0 {
                        *value += rng.normal(sigma);
                    }
                    *value = value.clamp(lo, hi);
                }
            }
            let energy = problem.energy(&child);
            evaluations += 1;
            if recorder.record(energy) {
                best_state = child.clone();
            }
            next_pop.push(child);
            next_fit.push(energy);
        }

        if next_pop.len() < population.len() {
            break; // budget exhausted mid-generation
        }
        population = next_pop;
        fitness = next_fit;
    }

    let best_energy = recorder.best();
    RunTrace {
        final_state: best_state.clone(),
        final_energy: best_energy,
        best_state,
        best_energy,
        best_by_iteration: recorder.finish(),
        evaluations,
        seed,
    }
}
