//! End-to-end tests of the command-line surface: exit codes, file
//! contracts, and error reporting.

use std::path::Path;
use std::process::Output;

use evloc::files::{load_instance, load_solution, verify_solution};

fn run(args: &[&str], dir: &Path) -> Output {
    std::process::Command::new(env!("CARGO_BIN_EXE_evloc"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn gen_small(dir: &Path, name: &str, facilities: &str, customers: &str, seed: &str) {
    let out = run(
        &[
            "gen",
            "--facilities",
            facilities,
            "--customers",
            customers,
            "--seed",
            seed,
            "--out",
            name,
        ],
        dir,
    );
    assert_eq!(code(&out), 0, "gen failed: {out:?}");
}

#[test]
fn usage_errors_exit_1_without_stack_traces() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["gen", "--no-such-flag"], dir.path());
    assert_eq!(code(&out), 1);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(!stderr.contains("panicked"), "stack trace leaked: {stderr}");

    let out = run(&["frobnicate"], dir.path());
    assert_eq!(code(&out), 1);

    let out = run(&["--help"], dir.path());
    assert_eq!(code(&out), 0);
}

#[test]
fn gen_validation_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &["gen", "--facilities", "0", "--customers", "4", "--out", "x.json"],
        dir.path(),
    );
    assert_eq!(code(&out), 2);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("count"), "message was: {stderr}");
    assert!(!dir.path().join("x.json").exists());
}

#[test]
fn gen_writes_requested_shape() {
    let dir = tempfile::tempdir().unwrap();
    gen_small(dir.path(), "inst.json", "20", "40", "7");
    let (file, _) = load_instance(&dir.path().join("inst.json")).unwrap();
    assert_eq!(file.facilities.len(), 20);
    assert_eq!(file.customers.len(), 40);
    assert_eq!(file.generator.as_ref().unwrap().seed, 7);
    assert_eq!(file.generator.as_ref().unwrap().rng, "chacha8");
    let text = std::fs::read_to_string(dir.path().join("inst.json")).unwrap();
    assert!(text.ends_with('\n'));
}

#[test]
fn exact_solve_writes_self_verifying_solution() {
    let dir = tempfile::tempdir().unwrap();
    gen_small(dir.path(), "inst.json", "5", "7", "11");
    let out = run(
        &[
            "solve-flp",
            "--instance",
            "inst.json",
            "--mode",
            "exact",
            "--out",
            "sol.json",
        ],
        dir.path(),
    );
    assert_eq!(code(&out), 0, "solve failed: {out:?}");
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("proven optimal"), "stdout: {stdout}");
    assert!(stdout.contains("transport:"));
    assert!(stdout.contains("sunken:"));

    let (instance, hash) = load_instance(&dir.path().join("inst.json")).unwrap();
    let solution = load_solution(&dir.path().join("sol.json")).unwrap();
    verify_solution(&instance, &hash, &solution).expect("solution self-verifies");

    let out = run(
        &[
            "solve-flp",
            "--instance",
            "inst.json",
            "--mode",
            "anneal",
            "--kmax",
            "500",
            "--out",
            "sol-anneal.json",
        ],
        dir.path(),
    );
    assert_eq!(code(&out), 0, "anneal failed: {out:?}");
    let annealed = load_solution(&dir.path().join("sol-anneal.json")).unwrap();
    verify_solution(&instance, &hash, &annealed).expect("annealed solution self-verifies");
}

#[test]
fn infeasible_model_exits_3_with_machine_readable_status() {
    let dir = tempfile::tempdir().unwrap();
    // One tiny facility cannot cover forty customers in full service.
    let out = run(
        &[
            "gen",
            "--facilities",
            "1",
            "--customers",
            "40",
            "--capacity-range",
            "1,2",
            "--allow-shortfall",
            "--out",
            "inst.json",
        ],
        dir.path(),
    );
    assert_eq!(code(&out), 0, "gen failed: {out:?}");
    let out = run(
        &[
            "solve-flp",
            "--instance",
            "inst.json",
            "--mode",
            "exact",
            "--out",
            "sol.json",
        ],
        dir.path(),
    );
    assert_eq!(code(&out), 3);
    let stdout = String::from_utf8_lossy(&out.stdout);
    let status_line = stdout.lines().find(|l| l.contains("\"status\"")).unwrap();
    let parsed: serde_json::Value = serde_json::from_str(status_line).unwrap();
    assert_eq!(parsed["status"], "infeasible");
    assert!(!dir.path().join("sol.json").exists());
}

#[test]
fn exact_mode_names_the_nonlinear_term() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &[
            "gen",
            "--facilities",
            "3",
            "--customers",
            "4",
            "--equity-weight",
            "2.5",
            "--out",
            "inst.json",
        ],
        dir.path(),
    );
    assert_eq!(code(&out), 0);
    let out = run(
        &[
            "solve-flp",
            "--instance",
            "inst.json",
            "--mode",
            "exact",
            "--out",
            "sol.json",
        ],
        dir.path(),
    );
    assert_eq!(code(&out), 2);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("equity"), "message: {stderr}");

    // The annealing path accepts the same model and reports the term.
    let out = run(
        &[
            "solve-flp",
            "--instance",
            "inst.json",
            "--mode",
            "anneal",
            "--kmax",
            "300",
            "--out",
            "sol.json",
        ],
        dir.path(),
    );
    assert_eq!(code(&out), 0, "anneal failed: {out:?}");
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("equity:"), "stdout: {stdout}");

    // Or the user forces the linear model explicitly.
    let out = run(
        &[
            "solve-flp",
            "--instance",
            "inst.json",
            "--mode",
            "exact",
            "--linear",
            "--out",
            "sol-linear.json",
        ],
        dir.path(),
    );
    assert_eq!(code(&out), 0);
}

#[test]
fn node_limit_exits_4_and_keeps_the_incumbent() {
    let dir = tempfile::tempdir().unwrap();
    gen_small(dir.path(), "inst.json", "12", "16", "3");
    let out = run(
        &[
            "solve-flp",
            "--instance",
            "inst.json",
            "--mode",
            "exact",
            "--node-limit",
            "2",
            "--out",
            "sol.json",
        ],
        dir.path(),
    );
    assert_eq!(code(&out), 4, "expected limits exit: {out:?}");
    // With an incumbent the solution file is written and flagged unproven;
    // with none, the error alone reports the limit.
    let stdout = String::from_utf8_lossy(&out.stdout);
    if dir.path().join("sol.json").exists() {
        assert!(stdout.contains("not proven optimal"), "stdout: {stdout}");
    } else {
        let stderr = String::from_utf8_lossy(&out.stderr);
        assert!(stderr.contains("no feasible incumbent"), "stderr: {stderr}");
    }
}

#[test]
fn tsp_needs_three_stops() {
    let dir = tempfile::tempdir().unwrap();
    gen_small(dir.path(), "inst.json", "2", "3", "1");
    let out = run(
        &[
            "solve-tsp",
            "--instance",
            "inst.json",
            "--kmax",
            "100",
            "--out",
            "tour.json",
        ],
        dir.path(),
    );
    assert_eq!(code(&out), 2);
}

#[test]
fn tsp_solution_self_verifies_and_has_a_trace() {
    let dir = tempfile::tempdir().unwrap();
    gen_small(dir.path(), "inst.json", "12", "3", "2");
    let out = run(
        &[
            "solve-tsp",
            "--instance",
            "inst.json",
            "--kmax",
            "5000",
            "--seed",
            "4",
            "--out",
            "tour.json",
        ],
        dir.path(),
    );
    assert_eq!(code(&out), 0, "solve-tsp failed: {out:?}");
    let (instance, hash) = load_instance(&dir.path().join("inst.json")).unwrap();
    let solution = load_solution(&dir.path().join("tour.json")).unwrap();
    verify_solution(&instance, &hash, &solution).unwrap();
    let trace = solution.trace.expect("trace stored");
    assert!(trace.samples.len() > 1);
    assert!(trace.samples.windows(2).all(|w| w[1].energy <= w[0].energy));
}

#[test]
fn bench_rejects_unknown_solver_and_handles_empty_seeds() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &[
            "bench",
            "--solvers",
            "sa,warpdrive",
            "--out-csv",
            "b.csv",
            "--out-md",
            "b.md",
        ],
        dir.path(),
    );
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("warpdrive"));

    let out = run(
        &[
            "bench",
            "--solvers",
            "patternsearch",
            "--dim",
            "3",
            "--seeds",
            "",
            "--budget",
            "500",
            "--out-csv",
            "b.csv",
            "--out-md",
            "b.md",
        ],
        dir.path(),
    );
    assert_eq!(code(&out), 0, "bench failed: {out:?}");
    let csv = std::fs::read_to_string(dir.path().join("b.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1, "header-only expected: {csv}");
    assert!(csv.starts_with("solver,seed,x1,x2,x3,objective,iterations,wall_ms"));
}

#[test]
fn bench_csv_matches_dimension() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &[
            "bench",
            "--solvers",
            "patternsearch,sa",
            "--dim",
            "4",
            "--seeds",
            "0,1,2",
            "--budget",
            "1000",
            "--out-csv",
            "b.csv",
            "--out-md",
            "b.md",
        ],
        dir.path(),
    );
    assert_eq!(code(&out), 0);
    let csv = std::fs::read_to_string(dir.path().join("b.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 2 * 3);
    for line in csv.lines().skip(1) {
        assert_eq!(line.split(',').count(), 2 + 4 + 3, "row: {line}");
    }
    let md = std::fs::read_to_string(dir.path().join("b.md")).unwrap();
    assert!(md.contains("| Solver | Seed | x1 | x2 | x3 | x4 | Objective Value |"));
}

#[test]
fn render_checks_the_hash_link() {
    let dir = tempfile::tempdir().unwrap();
    gen_small(dir.path(), "inst.json", "4", "6", "9");
    let out = run(
        &[
            "solve-flp",
            "--instance",
            "inst.json",
            "--mode",
            "exact",
            "--out",
            "sol.json",
        ],
        dir.path(),
    );
    assert_eq!(code(&out), 0);

    // Solution renders against its own instance.
    let out = run(
        &[
            "render",
            "--instance",
            "inst.json",
            "--solution",
            "sol.json",
            "--out",
            "map.svg",
        ],
        dir.path(),
    );
    assert_eq!(code(&out), 0, "render failed: {out:?}");
    let svg = std::fs::read_to_string(dir.path().join("map.svg")).unwrap();
    assert!(svg.starts_with("<svg"));
    assert!(svg.contains("<line"));
    assert!(svg.ends_with("</svg>\n"));

    // A different instance is refused by hash.
    gen_small(dir.path(), "other.json", "4", "6", "10");
    let out = run(
        &[
            "render",
            "--instance",
            "other.json",
            "--solution",
            "sol.json",
            "--out",
            "map2.svg",
        ],
        dir.path(),
    );
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("hash"));
    assert!(!dir.path().join("map2.svg").exists());
}

#[test]
fn corrupt_and_invalid_input_files_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("garbage.json"), "{not json").unwrap();
    let out = run(
        &[
            "solve-flp",
            "--instance",
            "garbage.json",
            "--mode",
            "exact",
            "--out",
            "sol.json",
        ],
        dir.path(),
    );
    assert_eq!(code(&out), 2);
    assert!(!String::from_utf8_lossy(&out.stderr).contains("panicked"));

    // Structurally valid JSON carrying an invalid instance.
    gen_small(dir.path(), "inst.json", "3", "4", "1");
    let text = std::fs::read_to_string(dir.path().join("inst.json")).unwrap();
    let bad = text.replacen("\"demand\": ", "\"demand\": -", 1);
    assert_ne!(text, bad);
    std::fs::write(dir.path().join("bad.json"), bad).unwrap();
    let out = run(
        &[
            "solve-flp",
            "--instance",
            "bad.json",
            "--mode",
            "exact",
            "--out",
            "sol.json",
        ],
        dir.path(),
    );
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("demand"));
}

#[test]
fn tampered_solution_objective_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    gen_small(dir.path(), "inst.json", "4", "5", "8");
    let out = run(
        &[
            "solve-flp",
            "--instance",
            "inst.json",
            "--mode",
            "exact",
            "--out",
            "sol.json",
        ],
        dir.path(),
    );
    assert_eq!(code(&out), 0);

    let text = std::fs::read_to_string(dir.path().join("sol.json")).unwrap();
    let mut value: serde_json::Value = serde_json::from_str(&text).unwrap();
    let stored = value["objective_total"].as_f64().unwrap();
    value["objective_total"] = serde_json::json!(stored + 10.0);
    std::fs::write(
        dir.path().join("tampered.json"),
        serde_json::to_string_pretty(&value).unwrap(),
    )
    .unwrap();

    let out = run(
        &[
            "render",
            "--instance",
            "inst.json",
            "--solution",
            "tampered.json",
            "--out",
            "map.svg",
        ],
        dir.path(),
    );
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("re-evaluate"));
}

#[test]
fn render_instance_without_solution_has_no_edges() {
    let dir = tempfile::tempdir().unwrap();
    gen_small(dir.path(), "inst.json", "4", "6", "9");
    let out = run(
        &["render", "--instance", "inst.json", "--out", "plain.svg"],
        dir.path(),
    );
    assert_eq!(code(&out), 0);
    let svg = std::fs::read_to_string(dir.path().join("plain.svg")).unwrap();
    assert!(!svg.contains("<line"));
    assert_eq!(svg.matches("<circle").count(), 6);
}

#[test]
fn tour_render_draws_closed_polyline() {
    let dir = tempfile::tempdir().unwrap();
    gen_small(dir.path(), "inst.json", "8", "3", "5");
    let out = run(
        &[
            "solve-tsp",
            "--instance",
            "inst.json",
            "--kmax",
            "3000",
            "--out",
            "tour.json",
        ],
        dir.path(),
    );
    assert_eq!(code(&out), 0);
    let out = run(
        &[
            "render",
            "--instance",
            "inst.json",
            "--solution",
            "tour.json",
            "--out",
            "tour.svg",
        ],
        dir.path(),
    );
    assert_eq!(code(&out), 0, "tour render failed: {out:?}");
    let svg = std::fs::read_to_string(dir.path().join("tour.svg")).unwrap();
    let polyline = svg.lines().find(|l| l.contains("<polyline")).unwrap();
    let points = polyline.split("points=\"").nth(1).unwrap().split('"').next().unwrap();
    assert_eq!(points.split_whitespace().count(), 9); // 8 stops + closing vertex
}
