//! Objective evaluation and feasibility checking for placement models.
//!
//! The objective has two classical parts (transport cost and sunken opening
//! cost), an equity penalty, and an open-ended list of extension terms:
//!
//! ```text
//! total = transport + sunken + equity_weight * equity + sum(extensions)
//! ```
//!
//! The equity penalty is the Gini coefficient of per-customer fulfillment
//! fractions `f_j = sum_i y[i][j]`: 0 when every customer is served equally,
//! approaching 1 as service concentrates on few customers. Extension terms
//! are pluggable penalties over `(instance, open, assign, params)` so the
//! model can grow new cost components without touching the evaluator.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::instance::{FlpInstance, FlpSolution, Violation};

/// Absolute tolerance used by feasibility checks; matches the LP solver's
/// constraint tolerance so LP-produced assignments always validate.
pub const FEAS_TOL: f64 = 1e-7;

/// Whether every customer must be fully served, or service is optional.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ServiceMode {
    /// `sum_i y[i][j] = 1` for every customer.
    Full,
    /// `sum_i y[i][j] <= 1`; customers may go unserved. Note that with
    /// nonnegative costs the all-closed network is then optimal.
    Partial,
}

/// Solve-time model configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelConfig {
    pub service_mode: ServiceMode,
    pub equity_weight: f64,
    pub extension_terms: Vec<ExtensionTerm>,
}

impl Default for ModelConfig {
    fn default() -> Self {
        Self {
            service_mode: ServiceMode::Full,
            equity_weight: 0.0,
            extension_terms: Vec::new(),
        }
    }
}

impl ModelConfig {
    /// Full-service linear model with no equity or extension terms.
    pub fn linear() -> Self {
        Self::default()
    }

    /// Adopts the instance's stored equity weight and extension terms.
    pub fn from_instance(inst: &FlpInstance) -> Self {
        Self {
            service_mode: ServiceMode::Full,
            equity_weight: inst.equity_weight,
            extension_terms: inst.extension_terms.clone(),
        }
    }

    pub fn with_service_mode(mut self, mode: ServiceMode) -> Self {
        self.service_mode = mode;
        self
    }

    pub fn with_equity_weight(mut self, w: f64) -> Self {
        self.equity_weight = w;
        self
    }
}

/// Signature of an extension-term evaluator: instance, open vector,
/// assignment matrix, and the term's parameter values, in that order.
pub type ExtensionEval = fn(&FlpInstance, &[bool], &[Vec<f64>], &[f64]) -> f64;

/// Box constraint on one extension parameter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamBound {
    pub param: String,
    pub lo: f64,
    pub hi: f64,
}

/// A pluggable objective term. Built-in terms can be reconstructed from
/// their name and parameters (see [`ExtensionTerm::from_spec`]); custom
/// terms carry an arbitrary function pointer.
#[derive(Clone)]
pub struct ExtensionTerm {
    pub name: String,
    /// Ordered `(name, value)` parameter pairs passed to the evaluator.
    pub params: Vec<(String, f64)>,
    /// Box constraints on parameters, enforced by `check_feasible`.
    pub bounds: Vec<ParamBound>,
    eval: ExtensionEval,
}

impl std::fmt::Debug for ExtensionTerm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ExtensionTerm")
            .field("name", &self.name)
            .field("params", &self.params)
            .field("bounds", &self.bounds)
            .finish()
    }
}

impl PartialEq for ExtensionTerm {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.params == other.params && self.bounds == other.bounds
    }
}

impl ExtensionTerm {
    pub fn custom(
        name: &str,
        params: Vec<(String, f64)>,
        bounds: Vec<ParamBound>,
        eval: ExtensionEval,
    ) -> Self {
        Self {
            name: name.to_string(),
            params,
            bounds,
            eval,
        }
    }

    /// Reference extension: `weight * sum_ij y[i][j] * max(0, dist_ij - threshold)`,
    /// a soft penalty on assignments longer than `threshold` map units.
    pub fn max_distance_penalty(weight: f64, threshold: f64) -> Self {
        Self {
            name: "max_distance_penalty".to_string(),
            params: vec![
                ("weight".to_string(), weight),
                ("threshold".to_string(), threshold),
            ],
            bounds: vec![
                ParamBound {
                    param: "weight".to_string(),
                    lo: 0.0,
                    hi: f64::INFINITY,
                },
                ParamBound {
                    param: "threshold".to_string(),
                    lo: 0.0,
                    hi: f64::INFINITY,
                },
            ],
            eval: eval_max_distance_penalty,
        }
    }

    /// Rebuilds a built-in term from its serialized name and parameters.
    /// Unknown names are rejected so instance files cannot silently carry
    /// terms this build does not implement.
    pub fn from_spec(name: &str, params: &[(String, f64)]) -> Result<Self, String> {
        match name {
            "max_distance_penalty" => {
                let get = |k: &str| {
                    params
                        .iter()
                        .find(|(n, _)| n == k)
                        .map(|(_, v)| *v)
                        .ok_or_else(|| format!("extension '{name}' missing parameter '{k}'"))
                };
                Ok(Self::max_distance_penalty(get("weight")?, get("threshold")?))
            }
            other => Err(format!("unknown extension term '{other}'")),
        }
    }

    pub fn evaluate(&self, inst: &FlpInstance, open: &[bool], assign: &[Vec<f64>]) -> f64 {
        let values: Vec<f64> = self.params.iter().map(|(_, v)| *v).collect();
        (self.eval)(inst, open, assign, &values)
    }

    /// Violations of this term's parameter box constraints.
    pub fn param_violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for b in &self.bounds {
            let value = self
                .params
                .iter()
                .find(|(n, _)| *n == b.param)
                .map(|(_, v)| *v);
            match value {
                None => out.push(Violation::new(
                    &format!("extension {}", self.name),
                    &format!("constrained parameter '{}' is missing", b.param),
                )),
                Some(v) if v < b.lo || v > b.hi => out.push(Violation::new(
                    &format!("extension {}", self.name),
                    &format!("parameter '{}' = {v} outside [{}, {}]", b.param, b.lo, b.hi),
                )),
                _ => {}
            }
        }
        out
    }
}

fn eval_max_distance_penalty(
    inst: &FlpInstance,
    _open: &[bool],
    assign: &[Vec<f64>],
    params: &[f64],
) -> f64 {
    let (weight, threshold) = (params[0], params[1]);
    let dist = inst.distance_matrix();
    let mut total = 0.0;
    for i in 0..inst.facility_count() {
        for j in 0..inst.customer_count() {
            total += assign[i][j] * (dist[i][j] - threshold).max(0.0);
        }
    }
    weight * total
}

/// Per-term decomposition of an objective value. `equity` is the raw Gini
/// coefficient; the weighted contribution appears only in `total`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveBreakdown {
    pub transport: f64,
    pub sunken: f64,
    pub equity: f64,
    pub extensions: BTreeMap<String, f64>,
    pub total: f64,
}

impl ObjectiveBreakdown {
    /// Term map whose values sum to `total`: the equity entry is weighted.
    pub fn weighted_terms(&self, equity_weight: f64) -> BTreeMap<String, f64> {
        let mut terms = BTreeMap::new();
        terms.insert("transport".to_string(), self.transport);
        terms.insert("sunken".to_string(), self.sunken);
        terms.insert("equity".to_string(), equity_weight * self.equity);
        for (k, v) in &self.extensions {
            terms.insert(format!("extension:{k}"), *v);
        }
        terms
    }

    /// Packages a solution, with objective terms that sum to the total.
    pub fn into_solution(
        self,
        open: Vec<bool>,
        assign: Vec<Vec<f64>>,
        equity_weight: f64,
    ) -> FlpSolution {
        let terms = self.weighted_terms(equity_weight);
        FlpSolution {
            open,
            assign,
            objective_total: terms.values().sum(),
            objective_terms: terms,
        }
    }
}

/// Errors from objective evaluation on malformed inputs.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EvalError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("open indicator {index} is not binary")]
    NonBinaryOpen { index: usize },
    #[error("assignment fraction [{i}][{j}] = {value} outside [0, 1]")]
    AssignOutOfRange { i: usize, j: usize, value: f64 },
}

/// Gini coefficient of a nonnegative vector:
/// `G = sum_a sum_b |v_a - v_b| / (2 k^2 mean)`.
///
/// Returns 0 for an all-zero vector (complete equality of nothing, by
/// convention). The result lies in `[0, 1)`.
pub fn gini(values: &[f64]) -> f64 {
    assert!(!values.is_empty(), "gini of an empty vector is undefined");
    debug_assert!(values.iter().all(|v| *v >= 0.0));
    // Canonical accumulation order makes the result exactly
    // permutation-invariant.
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let k = sorted.len() as f64;
    let sum: f64 = sorted.iter().sum();
    if sum == 0.0 {
        return 0.0;
    }
    let mut abs_diff = 0.0;
    for a in &sorted {
        for b in &sorted {
            abs_diff += (a - b).abs();
        }
    }
    // 2 k^2 mean = 2 k sum
    abs_diff / (2.0 * k * sum)
}

/// Equity penalty of an assignment: Gini of per-customer fulfillment.
pub fn equity_penalty(inst: &FlpInstance, assign: &[Vec<f64>]) -> f64 {
    let m = inst.customer_count();
    let fulfillment: Vec<f64> = (0..m)
        .map(|j| assign.iter().map(|row| row[j]).sum::<f64>().max(0.0))
        .collect();
    gini(&fulfillment)
}

/// Evaluates the full objective for a candidate `(open, assign)` pair.
pub fn evaluate(
    inst: &FlpInstance,
    cfg: &ModelConfig,
    open: &[bool],
    assign: &[Vec<f64>],
) -> Result<ObjectiveBreakdown, EvalError> {
    let n = inst.facility_count();
    let m = inst.customer_count();
    if open.len() != n {
        return Err(EvalError::ShapeMismatch(format!(
            "open has length {}, expected {n}",
            open.len()
        )));
    }
    if assign.len() != n || assign.iter().any(|r| r.len() != m) {
        return Err(EvalError::ShapeMismatch(format!(
            "assign must be {n}x{m}"
        )));
    }
    for (i, row) in assign.iter().enumerate() {
        for (j, &y) in row.iter().enumerate() {
            if !(-FEAS_TOL..=1.0 + FEAS_TOL).contains(&y) {
                return Err(EvalError::AssignOutOfRange { i, j, value: y });
            }
        }
    }

    let dist = inst.distance_matrix();
    let mut transport = 0.0;
    for i in 0..n {
        for j in 0..m {
            transport +=
                inst.variable_cost[i][j] * dist[i][j] * inst.customers[j].demand * assign[i][j];
        }
    }
    let sunken: f64 = inst
        .facilities
        .iter()
        .zip(open)
        .filter(|(_, &x)| x)
        .map(|(f, _)| f.sunken_cost)
        .sum();
    let equity = equity_penalty(inst, assign);
    let mut extensions = BTreeMap::new();
    for term in &cfg.extension_terms {
        extensions.insert(term.name.clone(), term.evaluate(inst, open, assign));
    }
    let total =
        transport + sunken + cfg.equity_weight * equity + extensions.values().sum::<f64>();

    Ok(ObjectiveBreakdown {
        transport,
        sunken,
        equity,
        extensions,
        total,
    })
}

/// Checks every model constraint; an empty list means `(open, assign)` is
/// feasible for the instance under `cfg`. Tolerance is [`FEAS_TOL`].
pub fn check_feasible(
    inst: &FlpInstance,
    cfg: &ModelConfig,
    open: &[bool],
    assign: &[Vec<f64>],
) -> Vec<Violation> {
    let n = inst.facility_count();
    let m = inst.customer_count();
    let mut out = Vec::new();

    if open.len() != n || assign.len() != n || assign.iter().any(|r| r.len() != m) {
        out.push(Violation::new("shape", &format!("expected open[{n}], assign {n}x{m}")));
        return out;
    }

    for (i, row) in assign.iter().enumerate() {
        for (j, &y) in row.iter().enumerate() {
            if y < -FEAS_TOL {
                out.push(Violation::new(&format!("assign[{i}][{j}]"), "negative fraction"));
            }
            let x = if open[i] { 1.0 } else { 0.0 };
            if y > x + FEAS_TOL {
                out.push(Violation::new(
                    &format!("assign[{i}][{j}]"),
                    "fraction exceeds open indicator",
                ));
            }
        }
    }

    for j in 0..m {
        let served: f64 = (0..n).map(|i| assign[i][j]).sum();
        match cfg.service_mode {
            ServiceMode::Full => {
                if (served - 1.0).abs() > FEAS_TOL {
                    out.push(Violation::new(
                        &format!("customer {j}"),
                        &format!("full service requires served fraction 1, found {served}"),
                    ));
                }
            }
            ServiceMode::Partial => {
                if served > 1.0 + FEAS_TOL {
                    out.push(Violation::new(
                        &format!("customer {j}"),
                        &format!("served fraction {served} exceeds 1"),
                    ));
                }
            }
        }
    }

    for i in 0..n {
        let load: f64 = (0..m)
            .map(|j| inst.customers[j].demand * assign[i][j])
            .sum();
        let x = if open[i] { 1.0 } else { 0.0 };
        let lo = inst.min_capacity * x;
        let hi = inst.facilities[i].capacity * x;
        if load < lo - FEAS_TOL {
            out.push(Violation::new(
                &format!("facility {i}"),
                &format!("load {load} below minimum capacity C_min = {}", inst.min_capacity),
            ));
        }
        if load > hi + FEAS_TOL {
            out.push(Violation::new(
                &format!("facility {i}"),
                &format!("load {load} exceeds capacity {hi}"),
            ));
        }
    }

    for term in &cfg.extension_terms {
        out.extend(term.param_violations());
    }

    out
}
