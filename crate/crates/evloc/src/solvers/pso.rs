//! Particle swarm with the standard velocity update: inertia, cognitive and
//! social pulls toward personal and global bests, per-dimension velocity
//! clamping, and reflection at the box bounds. Global best updates are
//! synchronous (once per generation).

use super::{Continuous, RunTrace, TraceRecorder};
use crate::rng::RngStream;

#[derive(Debug, Clone, Copy)]
pub struct PsoConfig {
    pub swarm: usize,
    pub inertia: f64,
    pub cognitive: f64,
    pub social: f64,
    /// Velocity clamp as a fraction of each coordinate's range.
    pub velocity_clamp_frac: f64,
    pub max_evaluations: usize,
}

impl Default for PsoConfig {
    fn default() -> Self {
        Self {
            swarm: 50,
            inertia: 0.729,
            cognitive: 1.49445,
            social: 1.49445,
            velocity_clamp_frac: 0.5,
            max_evaluations: 10_000,
        }
    }
}

/// Runs the swarm until the evaluation budget no longer fits a full
/// generation. Deterministic in `seed`.
pub fn particle_swarm<P: Continuous>(
    problem: &P,
    cfg: &PsoConfig,
    seed: u64,
) -> RunTrace<Vec<f64>> {
    assert!(cfg.swarm >= 2, "swarm must have at least 2 particles");
    let bounds = problem.bounds().to_vec();
    let dim = bounds.len();
    let mut rng = RngStream::from_seed(seed);
    let mut recorder = TraceRecorder::new();

    let mut positions: Vec<Vec<f64>> = Vec::with_capacity(cfg.swarm);
    let mut velocities: Vec<Vec<f64>> = vec![vec![0.0; dim]; cfg.swarm];
    let mut pbest: Vec<Vec<f64>> = Vec::with_capacity(cfg.swarm);
    let mut pbest_energy: Vec<f64> = Vec::with_capacity(cfg.swarm);
    let mut evaluations = 0usize;

    for _ in 0..cfg.swarm {
        let x = problem.random_point(&mut rng);
        let e = problem.energy(&x);
        evaluations += 1;
        recorder.record(e);
        pbest.push(x.clone());
        pbest_energy.push(e);
        positions.push(x);
    }

    let gbest_index = |pe: &[f64]| -> usize {
        let mut g = 0;
        for (i, &e) in pe.iter().enumerate() {
            if e < pe[g] {
                g = i;
            }
        }
        g
    };

    while evaluations + cfg.swarm <= cfg.max_evaluations {
        let gbest = pbest[gbest_index(&pbest_energy)].clone();
        for p in 0..cfg.swarm {
            for d in 0..dim {
                let (lo, hi) = bounds[d];
                let clamp = cfg.velocity_clamp_frac * (hi - lo);
                let r1 = rng.unit();
                let r2 = rng.unit();
                let mut v = cfg.inertia * velocities[p][d]
                    + cfg.cognitive * r1 * (pbest[p][d] - positions[p][d])
                    + cfg.social * r2 * (gbest[d] - positions[p][d]);
                v = v.clamp(-clamp, clamp);
                let mut x = positions[p][d] + v;
                // Reflect off the walls, reversing that component.
                if x > hi {
                    x = 2.0 * hi - x;
                    v = -v;
                }
                if x < lo {
                    x = 2.0 * lo - x;
                    v = -v;
                }
                positions[p][d] = x.clamp(lo, hi);
                velocities[p][d] = v;
            }
        }
        for p in 0..cfg.swarm {
            let e = problem.energy(&positions[p]);
            evaluations += 1;
            recorder.record(e);
            if e < pbest_energy[p] {
                pbest_energy[p] = e;
                pbest[p] = positions[p].clone();
            }
        }
    }

    let g = gbest_index(&pbest_energy);
    RunTrace {
        best_state: pbest[g].clone(),
        best_energy: pbest_energy[g],
        final_state: pbest[g].clone(),
        final_energy: pbest_energy[g],
        best_by_iteration: recorder.finish(),
        evaluations,
        seed,
    }
}
