//! Route minimization over charger locations: closed-tour length, an
//! annealing solver with a 2-opt neighborhood, and the factorial oracle for
//! small instances.

use itertools::Itertools;

use crate::instance::{distance, Point2D, Region};
use crate::rng::RngStream;
use crate::solvers::{simulated_annealing, AnnealSchedule, BlackBox, RunTrace};

/// A set of stops to visit on a closed route.
#[derive(Debug, Clone, PartialEq)]
pub struct TspInstance {
    pub points: Vec<Point2D>,
    pub region: Region,
}

impl TspInstance {
    pub fn new(points: Vec<Point2D>, region: Region) -> Self {
        Self { points, region }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Structural checks: at least one point, all inside the region.
    pub fn validate(&self) -> Vec<crate::instance::Violation> {
        let mut out = Vec::new();
        if self.points.is_empty() {
            out.push(crate::instance::Violation::new("points", "at least one point required"));
        }
        for (i, &p) in self.points.iter().enumerate() {
            if !self.region.contains(p) {
                out.push(crate::instance::Violation::new(
                    &format!("point {i}"),
                    "outside region",
                ));
            }
        }
        out
    }
}

/// A closed route: visiting order plus its cycle length.
#[derive(Debug, Clone, PartialEq)]
pub struct Tour {
    pub order: Vec<usize>,
    pub length: f64,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TspError {
    #[error("order is not a permutation of 0..{expected}: {detail}")]
    InvalidPermutation { expected: usize, detail: String },
    #[error("instance has {n} points; need at least {min}")]
    TooFewPoints { n: usize, min: usize },
    #[error("instance has {n} points; exhaustive search is guarded to {limit}")]
    TooLarge { n: usize, limit: usize },
}

fn check_permutation(n: usize, order: &[usize]) -> Result<(), TspError> {
    if order.len() != n {
        return Err(TspError::InvalidPermutation {
            expected: n,
            detail: format!("length {} differs from point count", order.len()),
        });
    }
    let mut seen = vec![false; n];
    for &i in order {
        if i >= n {
            return Err(TspError::InvalidPermutation {
                expected: n,
                detail: format!("index {i} out of range"),
            });
        }
        if seen[i] {
            return Err(TspError::InvalidPermutation {
                expected: n,
                detail: format!("index {i} repeated"),
            });
        }
        seen[i] = true;
    }
    Ok(())
}

fn cycle_length(points: &[Point2D], order: &[usize]) -> f64 {
    let n = order.len();
    (0..n)
        .map(|k| distance(points[order[k]], points[order[(k + 1) % n]]))
        .sum()
}

/// Closed-cycle Euclidean length of the given visiting order.
pub fn tour_length(inst: &TspInstance, order: &[usize]) -> Result<f64, TspError> {
    check_permutation(inst.len(), order)?;
    Ok(cycle_length(&inst.points, order))
}

/// Neighborhood move used by the annealer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TspNeighbor {
    /// Reverse a contiguous segment; removes edge crossings.
    #[default]
    TwoOpt,
    /// Swap two adjacent stops. Retained for ablation.
    AdjacentSwap,
}

struct TourProblem<'a> {
    points: &'a [Point2D],
    neighbor: TspNeighbor,
}

impl BlackBox for TourProblem<'_> {
    type State = Vec<usize>;

    fn random_state(&self, rng: &mut RngStream) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.points.len()).collect();
        rng.shuffle(&mut order);
        order
    }

    fn energy(&self, order: &Vec<usize>) -> f64 {
        cycle_length(self.points, order)
    }

    fn neighbor(&self, order: &Vec<usize>, _temperature: f64, rng: &mut RngStream) -> Vec<usize> {
        let n = order.len();
        let mut next = order.clone();
        match self.neighbor {
            TspNeighbor::TwoOpt => {
                let a = rng.index(n);
                let b = (a + 1 + rng.index(n - 1)) % n;
                let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                next[lo..=hi].reverse();
            }
            TspNeighbor::AdjacentSwap => {
                let i = rng.index(n);
                let j = (i + 1) % n;
                next.swap(i, j);
            }
        }
        next
    }
}

/// Anneals a tour from a random permutation. Returns the best tour seen and
/// the convergence trace. Requires at least 3 points.
pub fn tsp_anneal(
    inst: &TspInstance,
    schedule: &AnnealSchedule,
    neighbor: TspNeighbor,
    seed: u64,
) -> Result<(Tour, RunTrace<Vec<usize>>), TspError> {
    if inst.len() < 3 {
        return Err(TspError::TooFewPoints {
            n: inst.len(),
            min: 3,
        });
    }
    let problem = TourProblem {
        points: &inst.points,
        neighbor,
    };
    let trace = simulated_annealing(&problem, schedule, seed);
    let order = trace.best_state.clone();
    let length = tour_length(inst, &order).expect("annealer preserves permutations");
    Ok((Tour { order, length }, trace))
}

/// Exact optimum by enumerating the `(n-1)!/2` distinct cycles. Ties break
/// toward the lexicographically smallest order. Guarded to `n <= 10`.
pub fn tsp_brute_force(inst: &TspInstance) -> Result<Tour, TspError> {
    let n = inst.len();
    const LIMIT: usize = 10;
    if n == 0 {
        return Err(TspError::TooFewPoints { n, min: 1 });
    }
    if n > LIMIT {
        return Err(TspError::TooLarge { n, limit: LIMIT });
    }
    if n <= 2 {
        let order: Vec<usize> = (0..n).collect();
        let length = cycle_length(&inst.points, &order);
        return Ok(Tour { order, length });
    }

    let mut best: Option<Tour> = None;
    // First stop fixed at 0; skipping reversed duplicates via
    // order[1] < order[n-1] halves the enumeration.
    for rest in (1..n).permutations(n - 1) {
        if rest[0] > rest[n - 2] {
            continue;
        }
        let mut order = Vec::with_capacity(n);
        order.push(0);
        order.extend(rest);
        let length = cycle_length(&inst.points, &order);
        if best.as_ref().is_none_or(|b| length < b.length - 1e-12) {
            best = Some(Tour { order, length });
        }
    }
    Ok(best.expect("at least one cycle exists"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spatial::{sample_ppp, CountMode};

    fn square() -> TspInstance {
        TspInstance::new(
            vec![
                Point2D::new(0.0, 0.0),
                Point2D::new(1.0, 0.0),
                Point2D::new(1.0, 1.0),
                Point2D::new(0.0, 1.0),
            ],
            Region::unit(),
        )
    }

    fn random_instance(n: usize, seed: u64) -> TspInstance {
        let region = Region::new(0.0, 100.0, 0.0, 100.0);
        let mut rng = RngStream::from_seed(seed);
        TspInstance::new(sample_ppp(region, CountMode::Fixed(n), &mut rng), region)
    }

    #[test]
    fn validate_flags_outside_points() {
        let mut inst = square();
        assert!(inst.validate().is_empty());
        inst.points.push(Point2D::new(5.0, 5.0));
        let v = inst.validate();
        assert_eq!(v.len(), 1);
        assert!(v[0].field.contains("point 4"));
    }

    #[test]
    fn unit_square_perimeter() {
        let inst = square();
        assert_eq!(tour_length(&inst, &[0, 1, 2, 3]).unwrap(), 4.0);
    }

    #[test]
    fn all_three_cycles_congruent() {
        let inst = random_instance(3, 1);
        let a = tour_length(&inst, &[0, 1, 2]).unwrap();
        let b = tour_length(&inst, &[1, 2, 0]).unwrap();
        let c = tour_length(&inst, &[2, 1, 0]).unwrap();
        assert!((a - b).abs() < 1e-12);
        assert!((a - c).abs() < 1e-12);
    }

    /// Second code path: accumulate pairwise distances by explicit loop.
    #[test]
    fn length_matches_independent_recomputation() {
        let inst = random_instance(7, 2);
        let order = [3usize, 0, 6, 1, 5, 2, 4];
        let fast = tour_length(&inst, &order).unwrap();
        let mut slow = 0.0;
        for k in 0..order.len() {
            let p = inst.points[order[k]];
            let q = inst.points[order[(k + 1) % order.len()]];
            slow += ((p.x - q.x).powi(2) + (p.y - q.y).powi(2)).sqrt();
        }
        assert!((fast - slow).abs() < 1e-9);
    }

    #[test]
    fn invalid_permutations_are_rejected() {
        let inst = square();
        assert!(matches!(
            tour_length(&inst, &[0, 1, 2, 2]),
            Err(TspError::InvalidPermutation { .. })
        ));
        assert!(matches!(
            tour_length(&inst, &[0, 1, 2]),
            Err(TspError::InvalidPermutation { .. })
        ));
        assert!(matches!(
            tour_length(&inst, &[0, 1, 2, 9]),
            Err(TspError::InvalidPermutation { .. })
        ));
    }

    #[test]
    fn rotation_and_reversal_invariance() {
        let inst = random_instance(8, 3);
        let mut rng = RngStream::from_seed(10);
        let mut order: Vec<usize> = (0..8).collect();
        for _ in 0..50 {
            rng.shuffle(&mut order);
            let base = tour_length(&inst, &order).unwrap();
            let k = 1 + rng.index(7);
            let rotated: Vec<usize> = (0..8).map(|i| order[(i + k) % 8]).collect();
            let mut reversed = order.clone();
            reversed.reverse();
            assert!((tour_length(&inst, &rotated).unwrap() - base).abs() < 1e-9);
            assert!((tour_length(&inst, &reversed).unwrap() - base).abs() < 1e-9);
        }
    }

    #[test]
    fn brute_force_square_is_perimeter() {
        let tour = tsp_brute_force(&square()).unwrap();
        assert_eq!(tour.length, 4.0);
        assert_eq!(tour.order, vec![0, 1, 2, 3]);
    }

    #[test]
    fn brute_force_three_points_single_cycle() {
        let inst = random_instance(3, 4);
        let tour = tsp_brute_force(&inst).unwrap();
        assert_eq!(tour.order, vec![0, 1, 2]);
    }

    #[test]
    fn brute_force_guard() {
        let inst = random_instance(11, 5);
        assert!(matches!(
            tsp_brute_force(&inst),
            Err(TspError::TooLarge { .. })
        ));
    }

    #[test]
    fn two_opt_preserves_permutations() {
        let inst = random_instance(9, 6);
        let problem = TourProblem {
            points: &inst.points,
            neighbor: TspNeighbor::TwoOpt,
        };
        let mut rng = RngStream::from_seed(11);
        let mut state = problem.random_state(&mut rng);
        for _ in 0..300 {
            state = problem.neighbor(&state, 1.0, &mut rng);
            assert!(check_permutation(9, &state).is_ok());
        }
    }

    #[test]
    fn anneal_three_points_returns_the_cycle() {
        let inst = random_instance(3, 7);
        let schedule = AnnealSchedule::default().with_k_max(50);
        let (tour, _) = tsp_anneal(&inst, &schedule, TspNeighbor::TwoOpt, 1).unwrap();
        let only = tsp_brute_force(&inst).unwrap();
        assert!((tour.length - only.length).abs() < 1e-12);
    }

    #[test]
    fn anneal_reported_length_matches_recomputation() {
        let inst = random_instance(12, 8);
        let schedule = AnnealSchedule::default().with_k_max(2_000);
        for neighbor in [TspNeighbor::TwoOpt, TspNeighbor::AdjacentSwap] {
            let (tour, trace) = tsp_anneal(&inst, &schedule, neighbor, 2).unwrap();
            assert_eq!(tour.length, tour_length(&inst, &tour.order).unwrap());
            assert!(trace.is_non_increasing());
            assert!((trace.best_energy - tour.length).abs() < 1e-12);
        }
    }

    #[test]
    fn too_few_points_is_an_error() {
        let inst = random_instance(2, 9);
        let schedule = AnnealSchedule::default().with_k_max(10);
        assert!(matches!(
            tsp_anneal(&inst, &schedule, TspNeighbor::TwoOpt, 0),
            Err(TspError::TooFewPoints { .. })
        ));
    }

    #[test]
    fn fifty_stops_improve_markedly_over_sweeps() {
        let inst = random_instance(50, 12);
        let sweep = inst.len();
        let schedule = AnnealSchedule::default().with_k_max(300 * sweep);
        let (_, trace) = tsp_anneal(&inst, &schedule, TspNeighbor::TwoOpt, 3).unwrap();
        assert!(trace.is_non_increasing());
        let after_one = trace.best_by_iteration[1];
        let after_300_sweeps = *trace.best_by_iteration.last().unwrap();
        assert!(
            after_300_sweeps < after_one,
            "no improvement: {after_one} -> {after_300_sweeps}"
        );
    }

    #[test]
    fn near_oracle_on_small_instances() {
        let mut within = 0;
        let total = 10;
        for seed in 0..total {
            let inst = random_instance(8, 100 + seed);
            let schedule = AnnealSchedule::default().with_k_max(20_000);
            let (tour, _) = tsp_anneal(&inst, &schedule, TspNeighbor::TwoOpt, seed).unwrap();
            let oracle = tsp_brute_force(&inst).unwrap();
            if tour.length <= 1.05 * oracle.length {
                within += 1;
            }
        }
        assert!(within >= 9, "only {within}/{total} within 5% of the oracle");
    }
}
