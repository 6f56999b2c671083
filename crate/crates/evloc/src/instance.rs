//! Domain types for charger-placement instances.
//!
//! An [`FlpInstance`] couples `n` candidate facilities with `m` demand areas
//! ("customers") on a planar region. Costs, capacities and demands use
//! abstract units: currency for costs, kWh for energy, map units for length.
//! The variable-cost matrix entry `v[i][j]` is a rate per kWh per unit
//! distance, so the transport cost of serving customer `j` from facility `i`
//! is `v[i][j] * distance(i, j) * demand_j * y[i][j]`.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::objective::ExtensionTerm;

/// A location on the planar map.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point2D {
    pub x: f64,
    pub y: f64,
}

impl Point2D {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }
}

/// Euclidean distance between two points.
pub fn distance(a: Point2D, b: Point2D) -> f64 {
    (a.x - b.x).hypot(a.y - b.y)
}

/// Axis-aligned bounding box of the map.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Region {
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64) -> Self {
        Self {
            x_min,
            x_max,
            y_min,
            y_max,
        }
    }

    /// Unit square `[0,1] x [0,1]`.
    pub fn unit() -> Self {
        Self::new(0.0, 1.0, 0.0, 1.0)
    }

    pub fn width(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn height(&self) -> f64 {
        self.y_max - self.y_min
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }

    pub fn contains(&self, p: Point2D) -> bool {
        p.x >= self.x_min && p.x <= self.x_max && p.y >= self.y_min && p.y <= self.y_max
    }

    pub fn is_valid(&self) -> bool {
        self.x_min.is_finite()
            && self.x_max.is_finite()
            && self.y_min.is_finite()
            && self.y_max.is_finite()
            && self.x_min < self.x_max
            && self.y_min < self.y_max
    }
}

/// A candidate charging facility.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Facility {
    pub id: usize,
    pub location: Point2D,
    /// Fixed cost of opening the facility (`s_i`).
    pub sunken_cost: f64,
    /// Maximum energy the facility can deliver, kWh (`C_i`).
    pub capacity: f64,
}

/// A demand area.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Customer {
    pub id: usize,
    pub location: Point2D,
    /// Energy demanded, kWh (`d_j`).
    pub demand: f64,
}

/// A complete placement instance.
#[derive(Debug, Clone, PartialEq)]
pub struct FlpInstance {
    pub region: Region,
    pub facilities: Vec<Facility>,
    pub customers: Vec<Customer>,
    /// `n x m` rate matrix; entry `[i][j]` is cost per kWh per unit distance.
    pub variable_cost: Vec<Vec<f64>>,
    /// Minimum load an *open* facility must carry (`C_min`), kWh.
    pub min_capacity: f64,
    /// Default weight of the equity penalty; solvers may override via the
    /// model configuration.
    pub equity_weight: f64,
    /// Default extension terms; solvers may override via the model
    /// configuration.
    pub extension_terms: Vec<ExtensionTerm>,
}

impl FlpInstance {
    pub fn facility_count(&self) -> usize {
        self.facilities.len()
    }

    pub fn customer_count(&self) -> usize {
        self.customers.len()
    }

    pub fn total_capacity(&self) -> f64 {
        self.facilities.iter().map(|f| f.capacity).sum()
    }

    pub fn total_demand(&self) -> f64 {
        self.customers.iter().map(|c| c.demand).sum()
    }

    /// Facility-to-customer Euclidean distances, shape `n x m`.
    pub fn distance_matrix(&self) -> Vec<Vec<f64>> {
        self.facilities
            .iter()
            .map(|f| {
                self.customers
                    .iter()
                    .map(|c| distance(f.location, c.location))
                    .collect()
            })
            .collect()
    }

    /// Checks every structural invariant and returns one entry per violation.
    /// An empty list means the instance is well-formed.
    // Negated comparisons so NaN fields flag as violations.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let n = self.facilities.len();
        let m = self.customers.len();

        if !self.region.is_valid() {
            out.push(Violation::new(
                "region",
                "bounds must be finite with x_min < x_max and y_min < y_max",
            ));
        }
        if n == 0 {
            out.push(Violation::new("facilities", "at least one facility required"));
        }
        if m == 0 {
            out.push(Violation::new("customers", "at least one customer required"));
        }

        for f in &self.facilities {
            let field = format!("facility {}", f.id);
            if !f.location.x.is_finite() || !f.location.y.is_finite() {
                out.push(Violation::new(&field, "location coordinates must be finite"));
            } else if self.region.is_valid() && !self.region.contains(f.location) {
                out.push(Violation::new(&field, "location outside region"));
            }
            if !(f.sunken_cost >= 0.0) {
                out.push(Violation::new(&field, "sunken_cost must be >= 0"));
            }
            if !(f.capacity > 0.0) {
                out.push(Violation::new(&field, "capacity must be > 0"));
            }
        }
        for c in &self.customers {
            let field = format!("customer {}", c.id);
            if !c.location.x.is_finite() || !c.location.y.is_finite() {
                out.push(Violation::new(&field, "location coordinates must be finite"));
            } else if self.region.is_valid() && !self.region.contains(c.location) {
                out.push(Violation::new(&field, "location outside region"));
            }
            if !(c.demand > 0.0) {
                out.push(Violation::new(&field, "demand must be > 0"));
            }
        }

        if self.variable_cost.len() != n {
            out.push(Violation::new(
                "variable_cost",
                &format!("expected {n} rows, found {}", self.variable_cost.len()),
            ));
        } else {
            for (i, row) in self.variable_cost.iter().enumerate() {
                if row.len() != m {
                    out.push(Violation::new(
                        "variable_cost",
                        &format!("row {i}: expected {m} entries, found {}", row.len()),
                    ));
                } else if row.iter().any(|v| !(*v >= 0.0)) {
                    out.push(Violation::new(
                        "variable_cost",
                        &format!("row {i}: entries must be finite and >= 0"),
                    ));
                }
            }
        }

        let min_cap = self
            .facilities
            .iter()
            .map(|f| f.capacity)
            .fold(f64::INFINITY, f64::min);
        if !(self.min_capacity >= 0.0) {
            out.push(Violation::new("min_capacity", "must be >= 0"));
        } else if n > 0 && self.min_capacity > min_cap {
            out.push(Violation::new(
                "min_capacity",
                &format!("exceeds smallest facility capacity {min_cap}"),
            ));
        }
        if !(self.equity_weight >= 0.0) {
            out.push(Violation::new("equity_weight", "must be >= 0"));
        }

        out
    }
}

/// A named breach of an instance or solution invariant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    /// Which field or entity broke the rule.
    pub field: String,
    /// Which rule was broken.
    pub rule: String,
}

impl Violation {
    pub fn new(field: &str, rule: &str) -> Self {
        Self {
            field: field.to_string(),
            rule: rule.to_string(),
        }
    }
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.field, self.rule)
    }
}

/// A placement decision: which facilities open and how demand is assigned.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlpSolution {
    /// Open/close indicator per facility (`x_i`).
    pub open: Vec<bool>,
    /// `n x m` matrix of served demand fractions (`y_ij`).
    pub assign: Vec<Vec<f64>>,
    /// Total objective value.
    pub objective_total: f64,
    /// Per-term contributions; the equity entry is already weighted, so the
    /// values sum to `objective_total`.
    pub objective_terms: BTreeMap<String, f64>,
}

impl FlpSolution {
    /// Checks the solution's own structural invariants against an instance.
    pub fn validate(&self, inst: &FlpInstance) -> Vec<Violation> {
        let mut out = Vec::new();
        let n = inst.facility_count();
        let m = inst.customer_count();
        let tol = 1e-7;

        if self.open.len() != n {
            out.push(Violation::new("open", &format!("expected length {n}")));
            return out;
        }
        if self.assign.len() != n || self.assign.iter().any(|r| r.len() != m) {
            out.push(Violation::new("assign", &format!("expected shape {n}x{m}")));
            return out;
        }

        for (i, row) in self.assign.iter().enumerate() {
            for (j, &y) in row.iter().enumerate() {
                if !(-tol..=1.0 + tol).contains(&y) {
                    out.push(Violation::new(
                        &format!("assign[{i}][{j}]"),
                        "fraction outside [0, 1]",
                    ));
                }
                if y > tol && !self.open[i] {
                    out.push(Violation::new(
                        &format!("assign[{i}][{j}]"),
                        "positive fraction at a closed facility",
                    ));
                }
            }
        }
        for j in 0..m {
            let served: f64 = (0..n).map(|i| self.assign[i][j]).sum();
            if served > 1.0 + tol {
                out.push(Violation::new(
                    &format!("customer {j}"),
                    "served fraction exceeds 1",
                ));
            }
        }

        let term_sum: f64 = self.objective_terms.values().sum();
        let scale = self.objective_total.abs().max(1.0);
        if (term_sum - self.objective_total).abs() > 1e-9 * scale {
            out.push(Violation::new(
                "objective_total",
                "does not match the sum of objective_terms",
            ));
        }

        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    pub(crate) fn small_instance() -> FlpInstance {
        FlpInstance {
            region: Region::new(0.0, 10.0, 0.0, 10.0),
            facilities: vec![
                Facility {
                    id: 0,
                    location: Point2D::new(0.0, 0.0),
                    sunken_cost: 5.0,
                    capacity: 10.0,
                },
                Facility {
                    id: 1,
                    location: Point2D::new(10.0, 10.0),
                    sunken_cost: 3.0,
                    capacity: 8.0,
                },
            ],
            customers: vec![
                Customer {
                    id: 0,
                    location: Point2D::new(3.0, 4.0),
                    demand: 2.0,
                },
                Customer {
                    id: 1,
                    location: Point2D::new(6.0, 8.0),
                    demand: 4.0,
                },
            ],
            variable_cost: vec![vec![1.0, 1.0], vec![1.0, 1.0]],
            min_capacity: 0.0,
            equity_weight: 0.0,
            extension_terms: Vec::new(),
        }
    }

    #[test]
    fn distance_identity() {
        let p = Point2D::new(0.0, 0.0);
        assert_eq!(distance(p, p), 0.0);
    }

    #[test]
    fn distance_3_4_5() {
        assert_eq!(distance(Point2D::new(0.0, 0.0), Point2D::new(3.0, 4.0)), 5.0);
    }

    #[test]
    fn distance_by_direct_evaluation() {
        // sqrt(3^2 + 4^2) from (1,1) to (4,5)
        let d = distance(Point2D::new(1.0, 1.0), Point2D::new(4.0, 5.0));
        assert!((d - (9.0f64 + 16.0).sqrt()).abs() < 1e-15);
        assert!((d - 5.0).abs() < 1e-15);
    }

    #[test]
    fn distance_matrix_single_pair() {
        let mut inst = small_instance();
        inst.facilities.truncate(1);
        inst.customers = vec![Customer {
            id: 0,
            location: Point2D::new(0.0, 0.0),
            demand: 1.0,
        }];
        inst.variable_cost = vec![vec![1.0]];
        assert_eq!(inst.distance_matrix(), vec![vec![0.0]]);
    }

    #[test]
    fn distance_matrix_values_and_shape() {
        let mut inst = small_instance();
        inst.facilities.truncate(1);
        inst.customers = vec![
            Customer {
                id: 0,
                location: Point2D::new(3.0, 4.0),
                demand: 1.0,
            },
            Customer {
                id: 1,
                location: Point2D::new(6.0, 8.0),
                demand: 1.0,
            },
        ];
        inst.variable_cost = vec![vec![1.0, 1.0]];
        assert_eq!(inst.distance_matrix(), vec![vec![5.0, 10.0]]);

        let full = small_instance();
        let dm = full.distance_matrix();
        assert_eq!(dm.len(), full.facility_count());
        assert!(dm.iter().all(|row| row.len() == full.customer_count()));
    }

    #[test]
    fn validate_accepts_well_formed() {
        assert!(small_instance().validate().is_empty());
    }

    #[test]
    fn validate_flags_min_capacity() {
        let mut inst = small_instance();
        inst.min_capacity = 9.0; // > min capacity 8
        let v = inst.validate();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].field, "min_capacity");
    }

    #[test]
    fn validate_names_bad_customer() {
        let mut inst = small_instance();
        inst.customers[1].demand = -1.0;
        let v = inst.validate();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].field, "customer 1");
    }

    #[test]
    fn validate_is_idempotent() {
        let inst = small_instance();
        assert_eq!(inst.validate(), inst.validate());
    }

    proptest! {
        #[test]
        fn distance_is_a_metric(
            ax in -100.0f64..100.0, ay in -100.0f64..100.0,
            bx in -100.0f64..100.0, by in -100.0f64..100.0,
            cx in -100.0f64..100.0, cy in -100.0f64..100.0,
        ) {
            let a = Point2D::new(ax, ay);
            let b = Point2D::new(bx, by);
            let c = Point2D::new(cx, cy);
            prop_assert!(distance(a, b) >= 0.0);
            prop_assert_eq!(distance(a, b), distance(b, a));
            prop_assert!(distance(a, c) <= distance(a, b) + distance(b, c) + 1e-9);
        }
    }
}
