//! The annealer: Metropolis-style local search under a cooling schedule.
//!
//! One loop iteration draws a neighbor, evaluates it, and accepts it with
//! the schedule's acceptance probability at the current temperature
//! `temperature(1 - (k+1)/k_max)`. The walk state and the best-so-far state
//! are tracked separately and both are reported.

use super::{AnnealSchedule, BlackBox, RunTrace, TraceRecorder};
use crate::rng::RngStream;

/// Runs the annealer. Deterministic in `seed`; `k_max = 0` returns the
/// initial state untouched.
pub fn simulated_annealing<P: BlackBox>(
    problem: &P,
    schedule: &AnnealSchedule,
    seed: u64,
) -> RunTrace<P::State> {
    let mut rng = RngStream::from_seed(seed);
    let mut recorder = TraceRecorder::new();

    let mut state = problem.random_state(&mut rng);
    let mut energy = problem.energy(&state);
    let mut evaluations = 1usize;
    recorder.record(energy);

    let t0 = match schedule.initial_temp {
        Some(t) => t,
        None => {
            // Scale-free default: spread of the energy over random states.
            let samples: Vec<f64> = (0..100)
                .map(|_| problem.energy(&problem.random_state(&mut rng)))
                .collect();
            evaluations += samples.len();
            std_dev(&samples)
        }
    };

    let mut best_state = state.clone();
    let mut best_energy = energy;

    let k_max = schedule.k_max;
    for k in 0..k_max {
        let frac = 1.0 - (k as f64 + 1.0) / k_max as f64;
        let temperature = schedule.cooling.temperature(t0, frac);
        let candidate = problem.neighbor(&state, temperature, &mut rng);
        let candidate_energy = problem.energy(&candidate);
        evaluations += 1;
        if schedule
            .acceptance
            .probability(energy, candidate_energy, temperature)
            >= rng.unit()
        {
            state = candidate;
            energy = candidate_energy;
        }
        if recorder.record(energy) {
            best_state = state.clone();
            best_energy = energy;
        }
    }

    RunTrace {
        best_state,
        best_energy,
        final_state: state,
        final_energy: energy,
        best_by_iteration: recorder.finish(),
        evaluations,
        seed,
    }
}

fn std_dev(samples: &[f64]) -> f64 {
    let finite: Vec<f64> = samples.iter().copied().filter(|e| e.is_finite()).collect();
    if finite.len() < 2 {
        return 1.0;
    }
    let mean = finite.iter().sum::<f64>() / finite.len() as f64;
    let var = finite.iter().map(|e| (e - mean) * (e - mean)).sum::<f64>() / finite.len() as f64;
    var.sqrt().max(f64::MIN_POSITIVE)
}
