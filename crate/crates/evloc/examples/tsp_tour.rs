//! Anneal a closed route over 50 random stops with the 2-opt neighborhood
//! and watch the tour length converge.
//!
//! Run with: `cargo run --release --example tsp_tour`

use evloc::{
    sample_ppp, tsp_anneal, AnnealSchedule, CountMode, Region, RngStream, TspInstance,
    TspNeighbor,
};

fn main() {
    let region = Region::new(0.0, 100.0, 0.0, 100.0);
    let mut rng = RngStream::from_seed(7);
    let stops = TspInstance::new(sample_ppp(region, CountMode::Fixed(50), &mut rng), region);

    let schedule = AnnealSchedule::default().with_k_max(100_000);
    let (tour, trace) =
        tsp_anneal(&stops, &schedule, TspNeighbor::TwoOpt, 1).expect("enough stops");

    let initial = trace.best_by_iteration[0];
    println!("random initial tour: {initial:.2}");
    for checkpoint in [100usize, 1_000, 15_000, trace.best_by_iteration.len() - 1] {
        println!(
            "  best after {:>6} evaluations: {:.2}",
            checkpoint, trace.best_by_iteration[checkpoint]
        );
    }
    println!(
        "final tour: {:.2} ({:.0}% of the initial length)",
        tour.length,
        100.0 * tour.length / initial
    );
    assert!(trace.is_non_increasing());

    // The same seed reproduces the same route exactly.
    let (again, _) = tsp_anneal(&stops, &schedule, TspNeighbor::TwoOpt, 1).unwrap();
    assert_eq!(tour.order, again.order);
    println!("rerun with the same seed reproduced the tour");
}
