//! Compare the four built-in solvers on the 10-dimensional multimodal
//! benchmark and print the report as a markdown table.
//!
//! Run with: `cargo run --release --example rastrigin_comparison`

use evloc::rastrigin::{local_min_lattice, run_bench, solver_by_name, BenchSolver};

fn main() {
    let solvers: Vec<Box<dyn BenchSolver>> = ["sa", "pso", "ga", "patternsearch"]
        .iter()
        .map(|name| solver_by_name(name).expect("built-in"))
        .collect();

    let dimension = 10;
    let budget = 10_000;
    let seeds: Vec<u64> = (0..5).collect();
    let report = run_bench(&solvers, dimension, budget, &seeds);

    println!("{}", report.to_markdown());

    // Stochastic solvers stall on the function's local-minimum lattice;
    // classify where each run landed.
    let lattice = local_min_lattice(dimension, 5);
    for row in &report.rows {
        let nearest = lattice
            .iter()
            .copied()
            .min_by(|a, b| {
                (a - row.objective)
                    .abs()
                    .partial_cmp(&(b - row.objective).abs())
                    .unwrap()
            })
            .unwrap();
        println!(
            "{} seed {}: objective {:.6} (nearest lattice level {:.6})",
            row.solver, row.seed, row.objective, nearest
        );
    }
}
