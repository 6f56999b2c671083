//! Command-line surface: `gen`, `solve-flp`, `solve-tsp`, `bench`,
//! `render`.
//!
//! Exit codes: 0 success, 1 usage error, 2 validation error, 3 infeasible
//! model, 4 limits exceeded. Errors print as one-line messages, never
//! stack traces. Log verbosity comes from the `EVLOC_LOG` environment
//! variable. Commands are deterministic: identical flags produce
//! byte-identical output files (bench wall-time measurements excepted).

use std::path::PathBuf;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bnb::{solve_exact, BnbConfig, SolveError};
use crate::files::{
    load_instance, load_solution, save_instance, save_solution, FileError, GeneratorInfo,
    InstanceFile, ModelConfigSpec, SolutionFile, SolutionPayload, SolverInfo, TraceSummary,
    FORMAT_VERSION,
};
use crate::instance::Region;
use crate::objective::{ModelConfig, ServiceMode};
use crate::rastrigin::{run_bench, solver_by_name, BenchSolver};
use crate::render::{render_svg, Overlay};
use crate::solvers::{flp_anneal, AnnealSchedule};
use crate::spatial::{generate_instance, CostRange, CountMode, GenConfig};
use crate::tsp::{tsp_anneal, TspInstance, TspNeighbor};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_INFEASIBLE: i32 = 3;
pub const EXIT_LIMITS: i32 = 4;

#[derive(Debug)]
enum CliError {
    Validation(String),
    Infeasible(String),
    Limits(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => EXIT_VALIDATION,
            CliError::Infeasible(_) => EXIT_INFEASIBLE,
            CliError::Limits(_) => EXIT_LIMITS,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Validation(m) | CliError::Infeasible(m) | CliError::Limits(m) => m,
        }
    }
}

impl From<FileError> for CliError {
    fn from(e: FileError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<SolveError> for CliError {
    fn from(e: SolveError) -> Self {
        match e {
            SolveError::Infeasible { .. } => CliError::Infeasible(e.to_string()),
            SolveError::NoIncumbent { .. } => CliError::Limits(e.to_string()),
            other => CliError::Validation(other.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "evloc",
    about = "EV charger placement: generate instances, solve, benchmark, render",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random instance on a Poisson point process.
    Gen(GenArgs),
    /// Solve the placement model exactly or by annealing.
    SolveFlp(SolveFlpArgs),
    /// Anneal a closed tour over the instance's facility locations.
    SolveTsp(SolveTspArgs),
    /// Compare solvers on the multimodal benchmark function.
    Bench(BenchArgs),
    /// Render an instance, placement, or tour to SVG.
    Render(RenderArgs),
}

fn parse_region(text: &str) -> Result<Region, String> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 4 {
        return Err("expected x_min,x_max,y_min,y_max".to_string());
    }
    let mut values = [0.0; 4];
    for (slot, part) in values.iter_mut().zip(&parts) {
        *slot = part
            .trim()
            .parse::<f64>()
            .map_err(|e| format!("bad region coordinate '{part}': {e}"))?;
    }
    let region = Region::new(values[0], values[1], values[2], values[3]);
    if !region.is_valid() {
        return Err("region must satisfy x_min < x_max and y_min < y_max".to_string());
    }
    Ok(region)
}

fn parse_range(text: &str) -> Result<CostRange, String> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 2 {
        return Err("expected min,max".to_string());
    }
    let lo = parts[0].trim().parse::<f64>().map_err(|e| e.to_string())?;
    let hi = parts[1].trim().parse::<f64>().map_err(|e| e.to_string())?;
    Ok(CostRange::new(lo, hi))
}

#[derive(Args)]
struct GenArgs {
    /// Region bounds as x_min,x_max,y_min,y_max.
    #[arg(long, value_parser = parse_region, default_value = "0,100,0,100")]
    region: Region,
    /// Exact facility count.
    #[arg(long, conflicts_with = "facility_intensity")]
    facilities: Option<usize>,
    /// Facility intensity per unit area (Poisson count).
    #[arg(long)]
    facility_intensity: Option<f64>,
    /// Exact customer count.
    #[arg(long, conflicts_with = "customer_intensity")]
    customers: Option<usize>,
    /// Customer intensity per unit area (Poisson count).
    #[arg(long)]
    customer_intensity: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Sampling range min,max for facility sunken cost.
    #[arg(long, value_parser = parse_range, default_value = "50,150")]
    sunken_range: CostRange,
    /// Sampling range min,max for facility capacity (kWh).
    #[arg(long, value_parser = parse_range, default_value = "30,60")]
    capacity_range: CostRange,
    /// Sampling range min,max for the variable-cost rate.
    #[arg(long, value_parser = parse_range, default_value = "0.5,2")]
    vcost_range: CostRange,
    /// Sampling range min,max for customer demand (kWh).
    #[arg(long, value_parser = parse_range, default_value = "5,15")]
    demand_range: CostRange,
    /// Minimum load an open facility must carry.
    #[arg(long, default_value_t = 0.0)]
    min_capacity: f64,
    /// Default equity weight stored in the instance.
    #[arg(long, default_value_t = 0.0)]
    equity_weight: f64,
    /// Skip the capacity-covers-demand redraw loop.
    #[arg(long)]
    allow_shortfall: bool,
    #[arg(long)]
    out: PathBuf,
}

fn run_gen(args: &GenArgs) -> Result<(), CliError> {
    let facility_count = match (args.facilities, args.facility_intensity) {
        (Some(n), _) => CountMode::Fixed(n),
        (None, Some(lambda)) => CountMode::Poisson(lambda),
        (None, None) => {
            return Err(CliError::Validation(
                "one of --facilities or --facility-intensity is required".to_string(),
            ))
        }
    };
    let customer_count = match (args.customers, args.customer_intensity) {
        (Some(m), _) => CountMode::Fixed(m),
        (None, Some(lambda)) => CountMode::Poisson(lambda),
        (None, None) => {
            return Err(CliError::Validation(
                "one of --customers or --customer-intensity is required".to_string(),
            ))
        }
    };
    let cfg = GenConfig {
        region: args.region,
        facility_count,
        customer_count,
        seed: args.seed,
        cost_ranges: crate::spatial::CostRanges {
            sunken_cost: args.sunken_range,
            capacity: args.capacity_range,
            variable_cost: args.vcost_range,
            demand: args.demand_range,
        },
        require_coverage: !args.allow_shortfall,
    };
    let mut inst = generate_instance(&cfg).map_err(|e| CliError::Validation(e.to_string()))?;
    inst.min_capacity = args.min_capacity;
    inst.equity_weight = args.equity_weight;
    let violations = inst.validate();
    if !violations.is_empty() {
        return Err(CliError::Validation(format!(
            "generated instance rejects the requested parameters: {}",
            violations
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join("; ")
        )));
    }

    let file = InstanceFile::from_instance(&inst, Some(GeneratorInfo::seeded(args.seed)))?;
    let hash = save_instance(&args.out, &file)?;
    println!(
        "wrote instance: {} facilities, {} customers, sha256 {}",
        inst.facility_count(),
        inst.customer_count(),
        &hash[..12]
    );
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SolveMode {
    Exact,
    Anneal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ServiceArg {
    Full,
    Partial,
}

impl From<ServiceArg> for ServiceMode {
    fn from(s: ServiceArg) -> Self {
        match s {
            ServiceArg::Full => ServiceMode::Full,
            ServiceArg::Partial => ServiceMode::Partial,
        }
    }
}

#[derive(Args)]
struct SolveFlpArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, value_enum)]
    mode: SolveMode,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value = "full")]
    service: ServiceArg,
    /// Override the instance's stored equity weight.
    #[arg(long)]
    equity_weight: Option<f64>,
    /// Drop equity and extension terms (forces the linear model).
    #[arg(long)]
    linear: bool,
    /// Annealer seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Annealer iteration count.
    #[arg(long, default_value_t = 10_000)]
    kmax: usize,
    /// Annealer initial temperature (default: estimated from the energy
    /// spread of random states).
    #[arg(long)]
    t0: Option<f64>,
    /// Branch-and-bound node limit.
    #[arg(long, default_value_t = 1_000_000)]
    node_limit: usize,
    /// Branch-and-bound time limit in seconds.
    #[arg(long, default_value_t = 300)]
    time_limit_secs: u64,
    /// Relative optimality gap.
    #[arg(long, default_value_t = 1e-9)]
    gap: f64,
}

fn run_solve_flp(args: &SolveFlpArgs) -> Result<(), CliError> {
    let (file, hash) = load_instance(&args.instance)?;
    let inst = file.to_instance()?;

    let mut cfg = ModelConfig::from_instance(&inst).with_service_mode(args.service.into());
    if let Some(w) = args.equity_weight {
        cfg.equity_weight = w;
    }
    if args.linear {
        cfg.equity_weight = 0.0;
        cfg.extension_terms.clear();
    }

    let (report, trace, solver) = match args.mode {
        SolveMode::Exact => {
            let bnb = BnbConfig {
                node_limit: args.node_limit,
                time_limit: Duration::from_secs(args.time_limit_secs),
                gap_tolerance: args.gap,
                ..BnbConfig::default()
            };
            let report = match solve_exact(&inst, &cfg, &bnb) {
                Ok(report) => report,
                Err(SolveError::Infeasible { reason }) => {
                    println!(
                        "{}",
                        serde_json::json!({"status": "infeasible", "detail": reason})
                    );
                    return Err(CliError::Infeasible(reason));
                }
                Err(other) => return Err(other.into()),
            };
            let solver = SolverInfo {
                name: "bnb".to_string(),
                seed: None,
                config: serde_json::json!({
                    "node_limit": args.node_limit,
                    "time_limit_secs": args.time_limit_secs,
                    "gap_tolerance": args.gap,
                    "branching_rule": "most_fractional",
                }),
            };
            (report, None, solver)
        }
        SolveMode::Anneal => {
            let schedule = AnnealSchedule {
                k_max: args.kmax,
                initial_temp: args.t0,
                ..AnnealSchedule::default()
            };
            let (report, trace) = flp_anneal(&inst, &cfg, &schedule, args.seed)?;
            let solver = SolverInfo {
                name: "anneal".to_string(),
                seed: Some(args.seed),
                config: serde_json::json!({
                    "k_max": args.kmax,
                    "initial_temp": args.t0,
                    "cooling": "linear",
                    "acceptance": "metropolis",
                }),
            };
            (report, Some(TraceSummary::from_trace(&trace, 1_000)), solver)
        }
    };

    let solution_file = SolutionFile {
        format_version: FORMAT_VERSION.to_string(),
        instance_sha256: hash,
        solver,
        payload: SolutionPayload::Flp {
            model: ModelConfigSpec::of(&cfg),
            open: report.solution.open.clone(),
            assign: report.solution.assign.clone(),
            objective_terms: report.solution.objective_terms.clone(),
            objective_total: report.solution.objective_total,
            proven_optimal: report.proven_optimal,
            nodes_explored: Some(report.nodes_explored),
            best_bound: report.best_bound.is_finite().then_some(report.best_bound),
        },
        trace,
    };
    save_solution(&args.out, &solution_file)?;

    for (term, value) in &report.solution.objective_terms {
        println!("{term}: {value}");
    }
    println!("total: {}", report.solution.objective_total);
    println!(
        "status: {}",
        if report.proven_optimal {
            "proven optimal"
        } else {
            "incumbent (not proven optimal)"
        }
    );
    if args.mode == SolveMode::Exact && !report.proven_optimal {
        return Err(CliError::Limits(
            "limits reached before optimality was proven; best incumbent written".to_string(),
        ));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum NeighborArg {
    TwoOpt,
    Swap,
}

#[derive(Args)]
struct SolveTspArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, default_value_t = 100_000)]
    kmax: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "two-opt")]
    neighbor: NeighborArg,
    #[arg(long)]
    out: PathBuf,
}

fn run_solve_tsp(args: &SolveTspArgs) -> Result<(), CliError> {
    let (file, hash) = load_instance(&args.instance)?;
    let inst = file.to_instance()?;
    let stops = TspInstance::new(
        inst.facilities.iter().map(|f| f.location).collect(),
        inst.region,
    );
    let neighbor = match args.neighbor {
        NeighborArg::TwoOpt => TspNeighbor::TwoOpt,
        NeighborArg::Swap => TspNeighbor::AdjacentSwap,
    };
    let schedule = AnnealSchedule::default().with_k_max(args.kmax);
    let (tour, trace) = tsp_anneal(&stops, &schedule, neighbor, args.seed)
        .map_err(|e| CliError::Validation(e.to_string()))?;

    let solution_file = SolutionFile {
        format_version: FORMAT_VERSION.to_string(),
        instance_sha256: hash,
        solver: SolverInfo {
            name: "tsp-sa".to_string(),
            seed: Some(args.seed),
            config: serde_json::json!({
                "k_max": args.kmax,
                "neighbor": match neighbor {
                    TspNeighbor::TwoOpt => "two_opt",
                    TspNeighbor::AdjacentSwap => "adjacent_swap",
                },
                "cooling": "linear",
                "acceptance": "metropolis",
            }),
        },
        payload: SolutionPayload::Tour {
            order: tour.order.clone(),
            length: tour.length,
        },
        trace: Some(TraceSummary::from_trace(&trace, 1_000)),
    };
    save_solution(&args.out, &solution_file)?;

    let initial = trace.best_by_iteration.first().copied().unwrap_or(f64::NAN);
    println!("stops: {}", stops.len());
    println!("initial tour length: {initial}");
    println!("best tour length: {}", tour.length);
    Ok(())
}

#[derive(Args)]
struct BenchArgs {
    /// Comma-separated solver names (sa, pso, ga, patternsearch).
    #[arg(long, default_value = "sa,pso,ga,patternsearch")]
    solvers: String,
    #[arg(long, default_value_t = 10)]
    dim: usize,
    /// Comma-separated seeds; an empty string means header-only output.
    #[arg(long)]
    seeds: Option<String>,
    /// Energy-evaluation budget per run.
    #[arg(long, default_value_t = 10_000)]
    budget: usize,
    #[arg(long)]
    out_csv: PathBuf,
    #[arg(long)]
    out_md: PathBuf,
}

fn run_bench_cmd(args: &BenchArgs) -> Result<(), CliError> {
    let mut solvers: Vec<Box<dyn BenchSolver>> = Vec::new();
    for name in args.solvers.split(',').filter(|s| !s.trim().is_empty()) {
        let name = name.trim();
        let solver = solver_by_name(name)
            .ok_or_else(|| CliError::Validation(format!("unknown solver '{name}'")))?;
        solvers.push(solver);
    }
    if solvers.is_empty() {
        return Err(CliError::Validation("no solvers selected".to_string()));
    }
    if args.dim < 1 {
        return Err(CliError::Validation("dimension must be at least 1".to_string()));
    }

    let seeds: Vec<u64> = match &args.seeds {
        None => (0..30).collect(),
        Some(text) => {
            let mut seeds = Vec::new();
            for part in text.split(',').filter(|s| !s.trim().is_empty()) {
                seeds.push(part.trim().parse::<u64>().map_err(|e| {
                    CliError::Validation(format!("bad seed '{part}': {e}"))
                })?);
            }
            seeds
        }
    };

    let report = run_bench(&solvers, args.dim, args.budget, &seeds);
    std::fs::write(&args.out_csv, report.to_csv()).map_err(FileError::from)?;
    std::fs::write(&args.out_md, report.to_markdown()).map_err(FileError::from)?;
    for aggregate in &report.aggregates {
        println!(
            "{}: median {} (min {}, max {})",
            aggregate.solver, aggregate.median, aggregate.min, aggregate.max
        );
    }
    Ok(())
}

#[derive(Args)]
struct RenderArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long)]
    solution: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
}

fn run_render(args: &RenderArgs) -> Result<(), CliError> {
    let (file, hash) = load_instance(&args.instance)?;
    let inst = file.to_instance()?;

    let svg = match &args.solution {
        None => render_svg(&inst, Overlay::None),
        Some(path) => {
            let solution = load_solution(path)?;
            crate::files::verify_solution(&file, &hash, &solution)?;
            match &solution.payload {
                SolutionPayload::Flp { open, assign, objective_terms, objective_total, .. } => {
                    let packaged = crate::instance::FlpSolution {
                        open: open.clone(),
                        assign: assign.clone(),
                        objective_total: *objective_total,
                        objective_terms: objective_terms.clone(),
                    };
                    render_svg(&inst, Overlay::Assignment(&packaged))
                }
                SolutionPayload::Tour { order, .. } => render_svg(&inst, Overlay::Tour(order)),
            }
        }
    };
    std::fs::write(&args.out, svg).map_err(FileError::from)?;
    println!("wrote {}", args.out.display());
    Ok(())
}

/// Parses arguments and runs one command; returns the process exit code.
pub fn main_entry() -> i32 {
    let _ = env_logger::Builder::from_env(
        env_logger::Env::new().filter_or("EVLOC_LOG", "warn"),
    )
    .format_timestamp(None)
    .try_init();

    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return code;
        }
    };

    let result = match &cli.command {
        Command::Gen(args) => run_gen(args),
        Command::SolveFlp(args) => run_solve_flp(args),
        Command::SolveTsp(args) => run_solve_tsp(args),
        Command::Bench(args) => run_bench_cmd(args),
        Command::Render(args) => run_render(args),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.exit_code()
        }
    }
}
