//! Random instance generation on a homogeneous Poisson point process.
//!
//! Conditioned on the point count, a homogeneous PPP on a rectangle is
//! i.i.d. uniform in both coordinates, so sampling reduces to drawing the
//! count (fixed, or Poisson with mean `intensity * area`) and then uniform
//! points. Costs, capacities and demands are drawn uniformly from
//! configured ranges. Generation is a pure function of the configuration:
//! the same `GenConfig` always yields the same instance.

use serde::{Deserialize, Serialize};

use crate::instance::{Customer, Facility, FlpInstance, Point2D, Region};
use crate::rng::RngStream;

/// How many points to place: an exact count or a Poisson draw with the
/// given intensity per unit area.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CountMode {
    Fixed(usize),
    Poisson(f64),
}

/// Inclusive sampling range for one scalar quantity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostRange {
    pub min: f64,
    pub max: f64,
}

impl CostRange {
    pub fn new(min: f64, max: f64) -> Self {
        Self { min, max }
    }

    fn is_valid(&self) -> bool {
        self.min.is_finite() && self.max.is_finite() && 0.0 <= self.min && self.min <= self.max
    }

    fn sample(&self, rng: &mut RngStream) -> f64 {
        rng.uniform(self.min, self.max)
    }
}

/// Ranges for the drawn instance quantities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostRanges {
    pub sunken_cost: CostRange,
    pub capacity: CostRange,
    pub variable_cost: CostRange,
    pub demand: CostRange,
}

impl Default for CostRanges {
    fn default() -> Self {
        Self {
            sunken_cost: CostRange::new(50.0, 150.0),
            capacity: CostRange::new(30.0, 60.0),
            variable_cost: CostRange::new(0.5, 2.0),
            demand: CostRange::new(5.0, 15.0),
        }
    }
}

/// Instance generator configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenConfig {
    pub region: Region,
    pub facility_count: CountMode,
    pub customer_count: CountMode,
    pub seed: u64,
    pub cost_ranges: CostRanges,
    /// Redraw until total capacity covers total demand (needed for
    /// full-service models). Bounded; failure is reported, not looped.
    pub require_coverage: bool,
}

impl GenConfig {
    pub fn fixed_counts(region: Region, facilities: usize, customers: usize, seed: u64) -> Self {
        Self {
            region,
            facility_count: CountMode::Fixed(facilities),
            customer_count: CountMode::Fixed(customers),
            seed,
            cost_ranges: CostRanges::default(),
            require_coverage: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GenError {
    #[error("invalid generator configuration: {0}")]
    InvalidConfig(String),
    #[error(
        "could not satisfy capacity >= demand after {attempts} draws \
         (last draw: capacity {total_capacity}, demand {total_demand})"
    )]
    CoverageUnattainable {
        attempts: usize,
        total_capacity: f64,
        total_demand: f64,
    },
    #[error("could not draw a nonzero {what} count after {attempts} attempts")]
    EmptyDraw { what: String, attempts: usize },
}

// Negated comparison so a NaN intensity is rejected too.
#[allow(clippy::neg_cmp_op_on_partial_ord)]
fn validate_config(cfg: &GenConfig) -> Result<(), GenError> {
    if !cfg.region.is_valid() {
        return Err(GenError::InvalidConfig(
            "region bounds must be finite with min < max".to_string(),
        ));
    }
    for (what, mode) in [
        ("facility", cfg.facility_count),
        ("customer", cfg.customer_count),
    ] {
        match mode {
            CountMode::Fixed(0) => {
                return Err(GenError::InvalidConfig(format!(
                    "{what} count must be at least 1"
                )))
            }
            CountMode::Poisson(lambda) if !(lambda > 0.0) => {
                return Err(GenError::InvalidConfig(format!(
                    "{what} intensity must be positive"
                )))
            }
            _ => {}
        }
    }
    for (name, range) in [
        ("sunken_cost", cfg.cost_ranges.sunken_cost),
        ("capacity", cfg.cost_ranges.capacity),
        ("variable_cost", cfg.cost_ranges.variable_cost),
        ("demand", cfg.cost_ranges.demand),
    ] {
        if !range.is_valid() {
            return Err(GenError::InvalidConfig(format!(
                "{name} range must satisfy 0 <= min <= max"
            )));
        }
    }
    if cfg.cost_ranges.capacity.max <= 0.0 {
        return Err(GenError::InvalidConfig(
            "capacity range must allow positive capacities".to_string(),
        ));
    }
    if cfg.cost_ranges.demand.min <= 0.0 {
        return Err(GenError::InvalidConfig(
            "demand range must be strictly positive".to_string(),
        ));
    }
    Ok(())
}

/// Samples point locations for one realization of the process.
///
/// `Fixed(0)` and an empty Poisson draw both yield an empty list.
pub fn sample_ppp(region: Region, mode: CountMode, rng: &mut RngStream) -> Vec<Point2D> {
    let count = match mode {
        CountMode::Fixed(k) => k,
        CountMode::Poisson(lambda) => rng.poisson(lambda * region.area()),
    };
    (0..count)
        .map(|_| {
            Point2D::new(
                rng.uniform(region.x_min, region.x_max),
                rng.uniform(region.y_min, region.y_max),
            )
        })
        .collect()
}

const MAX_REDRAWS: usize = 100;

/// Generates an instance from the configuration. Deterministic in
/// `cfg.seed`; the draw order is facility points, customer points, sunken
/// costs, capacities, demands, then the rate matrix row-major.
pub fn generate_instance(cfg: &GenConfig) -> Result<FlpInstance, GenError> {
    validate_config(cfg)?;
    let mut rng = RngStream::from_seed(cfg.seed);
    let mut last_totals = (0.0, 0.0);

    for _attempt in 0..MAX_REDRAWS {
        let facility_points = sample_ppp(cfg.region, cfg.facility_count, &mut rng);
        let customer_points = sample_ppp(cfg.region, cfg.customer_count, &mut rng);
        if facility_points.is_empty() || customer_points.is_empty() {
            continue; // possible under Poisson counts; retry deterministically
        }
        let n = facility_points.len();
        let m = customer_points.len();

        let facilities: Vec<Facility> = facility_points
            .iter()
            .enumerate()
            .map(|(id, &location)| Facility {
                id,
                location,
                sunken_cost: cfg.cost_ranges.sunken_cost.sample(&mut rng),
                capacity: cfg.cost_ranges.capacity.sample(&mut rng).max(f64::MIN_POSITIVE),
            })
            .collect();
        let customers: Vec<Customer> = customer_points
            .iter()
            .enumerate()
            .map(|(id, &location)| Customer {
                id,
                location,
                demand: cfg.cost_ranges.demand.sample(&mut rng),
            })
            .collect();
        let variable_cost: Vec<Vec<f64>> = (0..n)
            .map(|_| {
                (0..m)
                    .map(|_| cfg.cost_ranges.variable_cost.sample(&mut rng))
                    .collect()
            })
            .collect();

        let total_capacity: f64 = facilities.iter().map(|f| f.capacity).sum();
        let total_demand: f64 = customers.iter().map(|c| c.demand).sum();
        last_totals = (total_capacity, total_demand);
        if cfg.require_coverage && total_capacity < total_demand {
            continue;
        }

        let inst = FlpInstance {
            region: cfg.region,
            facilities,
            customers,
            variable_cost,
            min_capacity: 0.0,
            equity_weight: 0.0,
            extension_terms: Vec::new(),
        };
        debug_assert!(inst.validate().is_empty());
        return Ok(inst);
    }

    if matches!(cfg.facility_count, CountMode::Poisson(_))
        || matches!(cfg.customer_count, CountMode::Poisson(_))
    {
        let zero_facilities = last_totals == (0.0, 0.0);
        if zero_facilities {
            return Err(GenError::EmptyDraw {
                what: "facility or customer".to_string(),
                attempts: MAX_REDRAWS,
            });
        }
    }
    Err(GenError::CoverageUnattainable {
        attempts: MAX_REDRAWS,
        total_capacity: last_totals.0,
        total_demand: last_totals.1,
    })
}
