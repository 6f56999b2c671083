//! Dense two-phase tableau simplex.
//!
//! Sized for this crate's models (tens of rows, hundreds of columns), so a
//! dense tableau is the right trade: no factorization machinery, and every
//! pivot decision is deterministic. Pricing is Dantzig (most negative
//! reduced cost, ties by lowest column index); after a run of degenerate
//! pivots the solver switches to Bland's rule (lowest eligible index), which
//! guarantees no cycling, and switches back once the objective moves. The
//! ratio test always breaks ties by the lowest basic-variable index.

/// Constraint sense.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

/// One dense constraint row `coeffs . x  (relation)  rhs`.
#[derive(Debug, Clone)]
pub struct LpConstraint {
    pub coeffs: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

/// Minimization problem `min c . x` over dense rows and per-variable bounds.
///
/// Lower bounds must be finite; upper bounds may be `f64::INFINITY`.
#[derive(Debug, Clone)]
pub struct LpProblem {
    pub objective: Vec<f64>,
    pub constraints: Vec<LpConstraint>,
    pub bounds: Vec<(f64, f64)>,
}

impl LpProblem {
    /// Problem with all variables bounded to `[0, +inf)`.
    pub fn new(objective: Vec<f64>) -> Self {
        let n = objective.len();
        Self {
            objective,
            constraints: Vec::new(),
            bounds: vec![(0.0, f64::INFINITY); n],
        }
    }

    pub fn constrain(&mut self, coeffs: Vec<f64>, relation: Relation, rhs: f64) {
        debug_assert_eq!(coeffs.len(), self.objective.len());
        self.constraints.push(LpConstraint {
            coeffs,
            relation,
            rhs,
        });
    }

    pub fn set_bounds(&mut self, var: usize, lo: f64, hi: f64) {
        self.bounds[var] = (lo, hi);
    }

    fn num_vars(&self) -> usize {
        self.objective.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Solver output; `values` and `objective` are meaningful only when
/// `status == Optimal`.
#[derive(Debug, Clone, PartialEq)]
pub struct LpResult {
    pub status: LpStatus,
    pub values: Vec<f64>,
    pub objective: f64,
}

impl LpResult {
    fn of_status(status: LpStatus, n: usize) -> Self {
        Self {
            status,
            values: vec![0.0; n],
            objective: 0.0,
        }
    }

    /// Maximum absolute constraint/bound violation of `values`; used by
    /// tests to confirm the solver's 1e-7 feasibility contract.
    pub fn max_violation(&self, problem: &LpProblem) -> f64 {
        let mut worst: f64 = 0.0;
        for c in &problem.constraints {
            let lhs: f64 = c
                .coeffs
                .iter()
                .zip(&self.values)
                .map(|(a, x)| a * x)
                .sum();
            let v = match c.relation {
                Relation::Le => lhs - c.rhs,
                Relation::Ge => c.rhs - lhs,
                Relation::Eq => (lhs - c.rhs).abs(),
            };
            worst = worst.max(v);
        }
        for (x, (lo, hi)) in self.values.iter().zip(&problem.bounds) {
            worst = worst.max(lo - x);
            if hi.is_finite() {
                worst = worst.max(x - hi);
            }
        }
        worst
    }
}

const PIVOT_EPS: f64 = 1e-9;
const COST_EPS: f64 = 1e-9;
const PHASE1_TOL: f64 = 1e-7;
/// Degenerate pivots tolerated before pricing falls back to Bland's rule.
const DEGENERATE_LIMIT: usize = 64;

struct Tableau {
    /// Canonical-form rows, each of length `cols + 1` (rhs last).
    rows: Vec<Vec<f64>>,
    /// Reduced-cost row of length `cols + 1`; last entry is minus the
    /// current objective value.
    cost: Vec<f64>,
    /// Basic variable per row.
    basis: Vec<usize>,
    cols: usize,
    /// First artificial column, if any; artificials never re-enter.
    artificial_start: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let scale = self.rows[r][c];
        for v in self.rows[r].iter_mut() {
            *v /= scale;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                let factor = row[c];
                if factor != 0.0 {
                    for (v, p) in row.iter_mut().zip(&pivot_row) {
                        *v -= factor * p;
                    }
                }
            }
        }
        let factor = self.cost[c];
        if factor != 0.0 {
            for (v, p) in self.cost.iter_mut().zip(&pivot_row) {
                *v -= factor * p;
            }
        }
        self.basis[r] = c;
    }

    fn entering(&self, bland: bool) -> Option<usize> {
        let limit = self.artificial_start;
        if bland {
            (0..limit).find(|&c| self.cost[c] < -COST_EPS)
        } else {
            let mut best: Option<(usize, f64)> = None;
            for c in 0..limit {
                let rc = self.cost[c];
                if rc < -COST_EPS && best.is_none_or(|(_, b)| rc < b) {
                    best = Some((c, rc));
                }
            }
            best.map(|(c, _)| c)
        }
    }

    /// Leaving row by minimum ratio, ties by lowest basic-variable index.
    fn leaving(&self, c: usize) -> Option<usize> {
        let mut choice: Option<(usize, f64)> = None;
        for (r, row) in self.rows.iter().enumerate() {
            let a = row[c];
            if a > PIVOT_EPS {
                let ratio = row[self.cols] / a;
                match choice {
                    None => choice = Some((r, ratio)),
                    Some((br, bratio)) => {
                        if ratio < bratio - PIVOT_EPS
                            || (ratio < bratio + PIVOT_EPS && self.basis[r] < self.basis[br])
                        {
                            choice = Some((r, ratio));
                        }
                    }
                }
            }
        }
        choice.map(|(r, _)| r)
    }

    fn objective(&self) -> f64 {
        -self.cost[self.cols]
    }

    /// Runs pivots until optimal or unbounded.
    fn optimize(&mut self) -> LpStatus {
        let mut degenerate_run = 0usize;
        loop {
            let bland = degenerate_run >= DEGENERATE_LIMIT;
            let Some(c) = self.entering(bland) else {
                return LpStatus::Optimal;
            };
            let Some(r) = self.leaving(c) else {
                return LpStatus::Unbounded;
            };
            let before = self.objective();
            self.pivot(r, c);
            if self.objective() < before - 1e-12 {
                degenerate_run = 0;
            } else {
                degenerate_run += 1;
            }
        }
    }
}

/// Solves the LP. Infeasibility and unboundedness are reported through
/// `LpResult::status`, never as panics.
pub fn solve_lp(problem: &LpProblem) -> LpResult {
    let nv = problem.num_vars();
    assert!(
        problem.constraints.iter().all(|c| c.coeffs.len() == nv),
        "constraint width must match variable count"
    );
    assert_eq!(problem.bounds.len(), nv, "one bound pair per variable");
    for &(lo, hi) in &problem.bounds {
        assert!(lo.is_finite(), "lower bounds must be finite");
        assert!(lo <= hi, "inverted bound [{lo}, {hi}]");
    }

    // Shift x = lo + t so every working variable is nonnegative; finite
    // upper bounds become explicit rows on t.
    let lows: Vec<f64> = problem.bounds.iter().map(|b| b.0).collect();
    let mut rows: Vec<(Vec<f64>, Relation, f64)> = Vec::new();
    for c in &problem.constraints {
        let shift: f64 = c.coeffs.iter().zip(&lows).map(|(a, l)| a * l).sum();
        rows.push((c.coeffs.clone(), c.relation, c.rhs - shift));
    }
    for (k, &(lo, hi)) in problem.bounds.iter().enumerate() {
        if hi.is_finite() {
            let mut coeffs = vec![0.0; nv];
            coeffs[k] = 1.0;
            rows.push((coeffs, Relation::Le, hi - lo));
        }
    }

    // Row equilibration keeps the phase-1 feasibility threshold scale-free.
    for (coeffs, _, rhs) in rows.iter_mut() {
        let scale = coeffs.iter().fold(0.0f64, |m, a| m.max(a.abs()));
        if scale > 0.0 {
            for a in coeffs.iter_mut() {
                *a /= scale;
            }
            *rhs /= scale;
        }
    }
    // Nonnegative right-hand sides so artificial starts are valid.
    for (coeffs, relation, rhs) in rows.iter_mut() {
        if *rhs < 0.0 {
            for a in coeffs.iter_mut() {
                *a = -*a;
            }
            *rhs = -*rhs;
            *relation = match *relation {
                Relation::Le => Relation::Ge,
                Relation::Ge => Relation::Le,
                Relation::Eq => Relation::Eq,
            };
        }
    }

    let m = rows.len();
    let num_slack = rows
        .iter()
        .filter(|r| matches!(r.1, Relation::Le | Relation::Ge))
        .count();
    let num_artificial = rows
        .iter()
        .filter(|r| matches!(r.1, Relation::Ge | Relation::Eq))
        .count();
    let artificial_start = nv + num_slack;
    let cols = artificial_start + num_artificial;

    let mut tableau = Tableau {
        rows: vec![vec![0.0; cols + 1]; m],
        cost: vec![0.0; cols + 1],
        basis: vec![0; m],
        cols,
        artificial_start,
    };

    let mut next_slack = nv;
    let mut next_artificial = artificial_start;
    for (r, (coeffs, relation, rhs)) in rows.iter().enumerate() {
        tableau.rows[r][..nv].copy_from_slice(coeffs);
        tableau.rows[r][cols] = *rhs;
        match relation {
            Relation::Le => {
                tableau.rows[r][next_slack] = 1.0;
                tableau.basis[r] = next_slack;
                next_slack += 1;
            }
            Relation::Ge => {
                tableau.rows[r][next_slack] = -1.0;
                next_slack += 1;
                tableau.rows[r][next_artificial] = 1.0;
                tableau.basis[r] = next_artificial;
                next_artificial += 1;
            }
            Relation::Eq => {
                tableau.rows[r][next_artificial] = 1.0;
                tableau.basis[r] = next_artificial;
                next_artificial += 1;
            }
        }
    }

    // Phase 1: minimize the artificial sum.
    if num_artificial > 0 {
        for c in artificial_start..cols {
            tableau.cost[c] = 1.0;
        }
        for r in 0..m {
            if tableau.basis[r] >= artificial_start {
                let row = tableau.rows[r].clone();
                for (v, p) in tableau.cost.iter_mut().zip(&row) {
                    *v -= p;
                }
            }
        }
        let status = tableau.optimize();
        debug_assert_ne!(status, LpStatus::Unbounded, "phase 1 is bounded below");
        if tableau.objective() > PHASE1_TOL {
            return LpResult::of_status(LpStatus::Infeasible, nv);
        }
        // Remove leftover degenerate artificials from the basis; rows with
        // no real pivot entry are redundant and dropped.
        let mut r = 0;
        while r < tableau.rows.len() {
            if tableau.basis[r] >= artificial_start {
                let pivot_col =
                    (0..artificial_start).find(|&c| tableau.rows[r][c].abs() > PIVOT_EPS);
                match pivot_col {
                    Some(c) => tableau.pivot(r, c),
                    None => {
                        tableau.rows.remove(r);
                        tableau.basis.remove(r);
                        continue;
                    }
                }
            }
            r += 1;
        }
    }

    // Phase 2: original objective in shifted coordinates.
    tableau.cost = vec![0.0; cols + 1];
    tableau.cost[..nv].copy_from_slice(&problem.objective);
    for c in artificial_start..cols {
        // Parked artificial columns must never price in.
        tableau.cost[c] = f64::INFINITY;
    }
    for r in 0..tableau.rows.len() {
        let b = tableau.basis[r];
        let cb = tableau.cost[b];
        if cb != 0.0 {
            let row = tableau.rows[r].clone();
            for (v, p) in tableau.cost.iter_mut().zip(&row) {
                *v -= cb * p;
            }
        }
    }

    if tableau.optimize() == LpStatus::Unbounded {
        return LpResult::of_status(LpStatus::Unbounded, nv);
    }

    let mut values = lows;
    for (r, &b) in tableau.basis.iter().enumerate() {
        if b < nv {
            values[b] += tableau.rows[r][tableau.cols];
        }
    }
    let objective = problem
        .objective
        .iter()
        .zip(&values)
        .map(|(c, x)| c * x)
        .sum();
    LpResult {
        status: LpStatus::Optimal,
        values,
        objective,
    }
}
