//! Anneal the full nonlinear placement model: equity-weighted objective
//! plus a soft penalty on long assignments. Exact search refuses these
//! terms; the open-set annealer handles them.
//!
//! Run with: `cargo run --release --example solve_heuristic`

use evloc::{
    flp_anneal, generate_instance, AnnealSchedule, ExtensionTerm, GenConfig, ModelConfig, Region,
    ServiceMode,
};

fn main() {
    let cfg = GenConfig::fixed_counts(Region::new(0.0, 100.0, 0.0, 100.0), 20, 40, 7);
    let inst = generate_instance(&cfg).expect("coverable config");

    let model = ModelConfig {
        service_mode: ServiceMode::Full,
        equity_weight: 50.0,
        extension_terms: vec![ExtensionTerm::max_distance_penalty(2.0, 40.0)],
    };
    let schedule = AnnealSchedule::default().with_k_max(1_500);

    let (report, trace) = flp_anneal(&inst, &model, &schedule, 3).expect("feasible model");
    let open_count = report.solution.open.iter().filter(|&&x| x).count();
    println!("opened {open_count} of {} facilities", inst.facility_count());
    for (term, value) in &report.solution.objective_terms {
        println!("  {term}: {value:.4}");
    }
    println!("total: {:.4}", report.solution.objective_total);
    println!(
        "walk: {} evaluations, best found at energy {:.4}",
        trace.evaluations, trace.best_energy
    );

    // The best-so-far trace never rises.
    assert!(trace.is_non_increasing());
    let first_finite = trace
        .best_by_iteration
        .iter()
        .copied()
        .find(|e| e.is_finite())
        .unwrap();
    println!(
        "first feasible energy {:.4} improved to {:.4}",
        first_finite, trace.best_energy
    );
}
