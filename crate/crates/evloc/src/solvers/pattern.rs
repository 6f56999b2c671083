//! Generalized pattern search: coordinate-direction polling with mesh
//! expansion on success and contraction on failure. Entirely deterministic;
//! there is no randomness to seed.

use super::{Continuous, RunTrace, TraceRecorder};

#[derive(Debug, Clone, Copy)]
pub struct PatternConfig {
    pub initial_mesh: f64,
    pub expansion: f64,
    pub contraction: f64,
    /// Polling stops once the mesh shrinks below this.
    pub mesh_tolerance: f64,
    pub max_evaluations: usize,
}

impl Default for PatternConfig {
    fn default() -> Self {
        Self {
            initial_mesh: 1.0,
            expansion: 2.0,
            contraction: 0.5,
            mesh_tolerance: 1e-10,
            max_evaluations: 10_000,
        }
    }
}

/// Polls the `2 * dim` coordinate directions from `start`, moving to the
/// first strict improvement (opportunistic polling in index order: `+e_0`,
/// `-e_0`, `+e_1`, ...). Out-of-bounds polls are skipped; a start outside
/// the bounds is clipped in and reported via a warning log.
pub fn pattern_search<P: Continuous>(
    problem: &P,
    cfg: &PatternConfig,
    start: &[f64],
) -> RunTrace<Vec<f64>> {
    let bounds = problem.bounds().to_vec();
    let dim = bounds.len();
    assert_eq!(start.len(), dim, "start must match the problem dimension");

    let mut current: Vec<f64> = start
        .iter()
        .zip(&bounds)
        .map(|(&x, &(lo, hi))| x.clamp(lo, hi))
        .collect();
    if current != start {
        log::warn!("pattern search start clipped into bounds: {start:?} -> {current:?}");
    }

    let mut recorder = TraceRecorder::new();
    let mut energy = problem.energy(&current);
    let mut evaluations = 1usize;
    recorder.record(energy);

    let mesh_cap = bounds
        .iter()
        .map(|(lo, hi)| hi - lo)
        .fold(cfg.initial_mesh, f64::max);
    let mut mesh = cfg.initial_mesh;

    'outer: while mesh >= cfg.mesh_tolerance && evaluations < cfg.max_evaluations {
        let mut improved = false;
        for d in 0..dim {
            for sign in [1.0, -1.0] {
                let candidate_coord = current[d] + sign * mesh;
                let (lo, hi) = bounds[d];
                if candidate_coord < lo || candidate_coord > hi {
                    continue;
                }
                let mut candidate = current.clone();
                candidate[d] = candidate_coord;
                let candidate_energy = problem.energy(&candidate);
                evaluations += 1;
                let strict = candidate_energy < energy;
                if strict {
                    current = candidate;
                    energy = candidate_energy;
                }
                recorder.record(candidate_energy);
                if strict {
                    improved = true;
                    break;
                }
                if evaluations >= cfg.max_evaluations {
                    break 'outer;
                }
            }
            if improved {
                break;
            }
        }
        mesh = if improved {
            (mesh * cfg.expansion).min(mesh_cap)
        } else {
            mesh * cfg.contraction
        };
    }

    RunTrace {
        best_state: current.clone(),
        best_energy: energy,
        final_state: current,
        final_energy: energy,
        best_by_iteration: recorder.finish(),
        evaluations,
        seed: 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solvers::BoxedProblem;

    #[test]
    fn one_dim_parabola_from_one() {
        let p = BoxedProblem::new(vec![(-5.0, 5.0)], |x| x[0] * x[0]);
        let trace = pattern_search(&p, &PatternConfig::default(), &[1.0]);
        assert!(trace.best_energy <= 1e-8, "final {}", trace.best_energy);
        assert!(trace.is_non_increasing());
    }

    #[test]
    fn start_at_optimum_stays_exact() {
        let p = BoxedProblem::new(vec![(-5.12, 5.12); 10], |x| {
            crate::rastrigin::rastrigin(x)
        });
        let trace = pattern_search(&p, &PatternConfig::default(), &[0.0; 10]);
        assert_eq!(trace.best_energy, 0.0);
        assert_eq!(trace.best_state, vec![0.0; 10]);
    }

    #[test]
    fn out_of_bounds_start_is_clipped() {
        let p = BoxedProblem::new(vec![(-1.0, 1.0)], |x| (x[0] - 0.25).powi(2));
        let trace = pattern_search(&p, &PatternConfig::default(), &[9.0]);
        assert!((trace.best_state[0] - 0.25).abs() < 1e-8);
    }

    #[test]
    fn identical_runs_regardless_of_any_seed() {
        // No randomness: two invocations agree exactly.
        let p = BoxedProblem::new(vec![(-5.0, 5.0); 3], |x| {
            x.iter().map(|v| (v - 1.2).abs()).sum()
        });
        let a = pattern_search(&p, &PatternConfig::default(), &[4.0, -3.0, 0.5]);
        let b = pattern_search(&p, &PatternConfig::default(), &[4.0, -3.0, 0.5]);
        assert_eq!(a.best_state, b.best_state);
        assert_eq!(a.best_by_iteration, b.best_by_iteration);
    }

    #[test]
    fn budget_is_respected() {
        let p = BoxedProblem::new(vec![(-5.0, 5.0); 6], |x| x.iter().map(|v| v * v).sum());
        let cfg = PatternConfig {
            max_evaluations: 50,
            ..PatternConfig::default()
        };
        let trace = pattern_search(&p, &cfg, &[3.0; 6]);
        assert!(trace.evaluations <= 50);
    }
}
