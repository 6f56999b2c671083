//! Versioned JSON file formats for instances and solutions.
//!
//! Instances and solutions are linked by content hash (SHA-256 of the
//! instance file's bytes), not by path, so a render or verify step can
//! refuse mismatched inputs. Numbers round-trip exactly: serialization uses
//! the shortest decimal form that parses back to the same float. Solution
//! files are self-verifying; [`verify_solution`] re-evaluates the stored
//! solution against the stored instance and checks the objective to 1e-9
//! relative.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::instance::{Customer, Facility, FlpInstance, Region, Violation};
use crate::objective::{evaluate, ExtensionTerm, ModelConfig, ServiceMode};
use crate::rng::RNG_ALGORITHM;
use crate::solvers::RunTrace;
use crate::tsp::{tour_length, TspInstance};

pub const FORMAT_VERSION: &str = "1";

#[derive(Debug, thiserror::Error)]
pub enum FileError {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported format version '{0}' (this build reads version {FORMAT_VERSION})")]
    UnsupportedVersion(String),
    #[error("instance is invalid: {}", format_violations(.0))]
    InvalidInstance(Vec<Violation>),
    #[error("unknown extension term: {0}")]
    UnknownExtension(String),
    #[error("instance hash mismatch: solution refers to {expected}, file hashes to {found}")]
    HashMismatch { expected: String, found: String },
    #[error("stored objective {stored} does not re-evaluate (got {recomputed})")]
    ObjectiveMismatch { stored: f64, recomputed: f64 },
    #[error("solution file is inconsistent: {0}")]
    BadSolution(String),
}

fn format_violations(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

/// Provenance of a generated instance: seed plus PRNG identity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorInfo {
    pub seed: u64,
    pub rng: String,
}

impl GeneratorInfo {
    pub fn seeded(seed: u64) -> Self {
        Self {
            seed,
            rng: RNG_ALGORITHM.to_string(),
        }
    }
}

/// Serialized form of an extension term: name plus named parameters. Only
/// built-in terms round-trip through files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtensionTermSpec {
    pub name: String,
    pub params: Vec<(String, f64)>,
}

impl ExtensionTermSpec {
    pub fn of(term: &ExtensionTerm) -> Self {
        Self {
            name: term.name.clone(),
            params: term.params.clone(),
        }
    }

    pub fn build(&self) -> Result<ExtensionTerm, FileError> {
        ExtensionTerm::from_spec(&self.name, &self.params)
            .map_err(|_| FileError::UnknownExtension(self.name.clone()))
    }
}

/// On-disk instance format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub format_version: String,
    pub generator: Option<GeneratorInfo>,
    pub region: Region,
    pub facilities: Vec<Facility>,
    pub customers: Vec<Customer>,
    pub variable_cost: Vec<Vec<f64>>,
    pub min_capacity: f64,
    pub equity_weight: f64,
    pub extension_terms: Vec<ExtensionTermSpec>,
}

impl InstanceFile {
    /// Captures an instance for serialization. Fails if an extension term
    /// is not a built-in, since such a file could never be read back.
    pub fn from_instance(
        inst: &FlpInstance,
        generator: Option<GeneratorInfo>,
    ) -> Result<Self, FileError> {
        let mut extension_terms = Vec::new();
        for term in &inst.extension_terms {
            let spec = ExtensionTermSpec::of(term);
            spec.build()?;
            extension_terms.push(spec);
        }
        Ok(Self {
            format_version: FORMAT_VERSION.to_string(),
            generator,
            region: inst.region,
            facilities: inst.facilities.clone(),
            customers: inst.customers.clone(),
            variable_cost: inst.variable_cost.clone(),
            min_capacity: inst.min_capacity,
            equity_weight: inst.equity_weight,
            extension_terms,
        })
    }

    /// Reconstructs and validates the in-memory instance.
    pub fn to_instance(&self) -> Result<FlpInstance, FileError> {
        if self.format_version != FORMAT_VERSION {
            return Err(FileError::UnsupportedVersion(self.format_version.clone()));
        }
        let mut extension_terms = Vec::new();
        for spec in &self.extension_terms {
            extension_terms.push(spec.build()?);
        }
        let inst = FlpInstance {
            region: self.region,
            facilities: self.facilities.clone(),
            customers: self.customers.clone(),
            variable_cost: self.variable_cost.clone(),
            min_capacity: self.min_capacity,
            equity_weight: self.equity_weight,
            extension_terms,
        };
        let violations = inst.validate();
        if !violations.is_empty() {
            return Err(FileError::InvalidInstance(violations));
        }
        Ok(inst)
    }
}

/// Hex SHA-256 of file bytes; the instance identity solutions refer to.
pub fn content_hash(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let digest = hasher.finalize();
    let mut out = String::with_capacity(64);
    for byte in digest {
        out.push_str(&format!("{byte:02x}"));
    }
    out
}

/// Pretty JSON with a trailing newline; all outputs are newline-terminated.
pub fn to_json_string<T: Serialize>(value: &T) -> Result<String, FileError> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    Ok(text)
}

pub fn save_instance(path: &Path, file: &InstanceFile) -> Result<String, FileError> {
    let text = to_json_string(file)?;
    std::fs::write(path, &text)?;
    Ok(content_hash(text.as_bytes()))
}

/// Loads an instance file and returns it with its content hash.
pub fn load_instance(path: &Path) -> Result<(InstanceFile, String), FileError> {
    let bytes = std::fs::read(path)?;
    let file: InstanceFile = serde_json::from_slice(&bytes)?;
    Ok((file, content_hash(&bytes)))
}

/// Model configuration as stored in solution files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelConfigSpec {
    pub service_mode: ServiceMode,
    pub equity_weight: f64,
    pub extension_terms: Vec<ExtensionTermSpec>,
}

impl ModelConfigSpec {
    pub fn of(cfg: &ModelConfig) -> Self {
        Self {
            service_mode: cfg.service_mode,
            equity_weight: cfg.equity_weight,
            extension_terms: cfg.extension_terms.iter().map(ExtensionTermSpec::of).collect(),
        }
    }

    pub fn build(&self) -> Result<ModelConfig, FileError> {
        let mut extension_terms = Vec::new();
        for spec in &self.extension_terms {
            extension_terms.push(spec.build()?);
        }
        Ok(ModelConfig {
            service_mode: self.service_mode,
            equity_weight: self.equity_weight,
            extension_terms,
        })
    }
}

/// Which solver produced a solution, its seed, and its knobs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverInfo {
    pub name: String,
    pub seed: Option<u64>,
    pub config: serde_json::Value,
}

/// Downsampled best-so-far convergence trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceSummary {
    pub evaluations: usize,
    /// First best-so-far value, absent when no feasible state was seen yet.
    pub initial_energy: Option<f64>,
    pub best_energy: f64,
    pub samples: Vec<TracePoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub iteration: usize,
    pub energy: f64,
}

impl TraceSummary {
    /// Keeps at most `max_samples` evenly spaced finite points plus the
    /// last; infinite entries (infeasible prefixes) are skipped.
    pub fn from_trace<S>(trace: &RunTrace<S>, max_samples: usize) -> Self {
        let series = &trace.best_by_iteration;
        let stride = (series.len() / max_samples.max(1)).max(1);
        let mut samples = Vec::new();
        for (iteration, &energy) in series.iter().enumerate() {
            let keep = iteration.is_multiple_of(stride) || iteration + 1 == series.len();
            if keep && energy.is_finite() {
                samples.push(TracePoint { iteration, energy });
            }
        }
        Self {
            evaluations: trace.evaluations,
            initial_energy: series.first().copied().filter(|e| e.is_finite()),
            best_energy: trace.best_energy,
            samples,
        }
    }
}

/// Solution payload: either a placement or a tour.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SolutionPayload {
    Flp {
        model: ModelConfigSpec,
        open: Vec<bool>,
        assign: Vec<Vec<f64>>,
        objective_terms: BTreeMap<String, f64>,
        objective_total: f64,
        proven_optimal: bool,
        nodes_explored: Option<usize>,
        best_bound: Option<f64>,
    },
    Tour {
        order: Vec<usize>,
        length: f64,
    },
}

/// On-disk solution format, tied to its instance by content hash.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionFile {
    pub format_version: String,
    pub instance_sha256: String,
    pub solver: SolverInfo,
    #[serde(flatten)]
    pub payload: SolutionPayload,
    pub trace: Option<TraceSummary>,
}

pub fn save_solution(path: &Path, file: &SolutionFile) -> Result<(), FileError> {
    let text = to_json_string(file)?;
    std::fs::write(path, &text)?;
    Ok(())
}

pub fn load_solution(path: &Path) -> Result<SolutionFile, FileError> {
    let bytes = std::fs::read(path)?;
    Ok(serde_json::from_slice(&bytes)?)
}

const VERIFY_REL_TOL: f64 = 1e-9;

/// Re-derives the stored objective from raw data and checks the hash link.
/// Passing means the solution file is internally consistent with the
/// instance file it names.
pub fn verify_solution(
    instance_file: &InstanceFile,
    instance_hash: &str,
    solution: &SolutionFile,
) -> Result<(), FileError> {
    if solution.format_version != FORMAT_VERSION {
        return Err(FileError::UnsupportedVersion(
            solution.format_version.clone(),
        ));
    }
    if solution.instance_sha256 != instance_hash {
        return Err(FileError::HashMismatch {
            expected: solution.instance_sha256.clone(),
            found: instance_hash.to_string(),
        });
    }
    let inst = instance_file.to_instance()?;
    match &solution.payload {
        SolutionPayload::Flp {
            model,
            open,
            assign,
            objective_total,
            ..
        } => {
            let cfg = model.build()?;
            let breakdown = evaluate(&inst, &cfg, open, assign)
                .map_err(|e| FileError::BadSolution(e.to_string()))?;
            let scale = objective_total.abs().max(1.0);
            if (breakdown.total - objective_total).abs() > VERIFY_REL_TOL * scale {
                return Err(FileError::ObjectiveMismatch {
                    stored: *objective_total,
                    recomputed: breakdown.total,
                });
            }
        }
        SolutionPayload::Tour { order, length } => {
            let stops = TspInstance::new(
                inst.facilities.iter().map(|f| f.location).collect(),
                inst.region,
            );
            let recomputed =
                tour_length(&stops, order).map_err(|e| FileError::BadSolution(e.to_string()))?;
            let scale = length.abs().max(1.0);
            if (recomputed - length).abs() > VERIFY_REL_TOL * scale {
                return Err(FileError::ObjectiveMismatch {
                    stored: *length,
                    recomputed,
                });
            }
        }
    }
    Ok(())
}
