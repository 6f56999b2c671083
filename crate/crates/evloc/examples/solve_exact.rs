//! Solve a small placement instance exactly by branch-and-bound and
//! cross-check the result against exhaustive enumeration.
//!
//! Run with: `cargo run --example solve_exact`

use evloc::{
    brute_force, generate_instance, solve_exact, BnbConfig, CostRange, GenConfig, ModelConfig,
    Region,
};

fn main() {
    let mut cfg = GenConfig::fixed_counts(Region::new(0.0, 100.0, 0.0, 100.0), 6, 8, 42);
    cfg.cost_ranges.demand = CostRange::new(1.0, 6.0);
    cfg.cost_ranges.capacity = CostRange::new(8.0, 16.0);
    cfg.cost_ranges.sunken_cost = CostRange::new(20.0, 120.0);
    let inst = generate_instance(&cfg).expect("coverable config");

    let model = ModelConfig::linear();
    let report = solve_exact(&inst, &model, &BnbConfig::default()).expect("feasible model");

    println!("open facilities: {:?}", report.solution.open);
    for (term, value) in &report.solution.objective_terms {
        println!("  {term}: {value:.4}");
    }
    println!("total: {:.4}", report.solution.objective_total);
    println!(
        "proven optimal: {} ({} nodes, bound {:.4})",
        report.proven_optimal, report.nodes_explored, report.best_bound
    );

    // The 2^6 enumeration agrees with the search.
    let oracle = brute_force(&inst, &model).expect("feasible model");
    let gap = (report.solution.objective_total - oracle.objective_total).abs();
    println!(
        "exhaustive oracle total: {:.4} (difference {:.2e})",
        oracle.objective_total, gap
    );
    assert!(gap <= 1e-9 * oracle.objective_total.abs().max(1.0));
}
