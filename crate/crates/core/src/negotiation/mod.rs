//! Public-sector price negotiation.
//!
//! Public quantities are affine in the two public prices, so the program
//! reduces to a search over the price square `[0, p_max]^2`:
//!
//! ```text
//! minimize   mu * (q1 p1 + q2 p2) + (1 - mu) |p1 - p2|
//! subject to q1 + q2 >= r_pub D
//!            q_priv (p_priv - d_i) + q_i (p_i - d_i) >= P_i
//!            q_i + q_priv <= K_i
//!            K_i - q_i >= U
//!            q_i >= 0, p_i >= 0
//! where      q_i = a_pub - b p_i + c p_j
//! ```
//!
//! [`solve`] certifies a global minimum by spatial branch and bound;
//! [`oracle_solve`] is an exhaustive uniform-grid search kept deliberately
//! separate from it.

mod geometry;
mod oracle;
mod search;

use serde::{Deserialize, Serialize};

use crate::demand::HistoricalRecord;
use crate::market::{DemandCurve, Manufacturer, PrivateEquilibrium, ScenarioConfig};
use crate::{Error, Result};

pub use oracle::{oracle_solve, OracleOutcome};
pub use search::solve;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Largest constraint violation accepted as feasible (scaled units).
    pub feasibility: f64,
    /// Cells are not split below this width (USD).
    pub price_resolution: f64,
    /// Bound on the certified distance from the global optimum.
    pub objective_gap: f64,
    /// Cells per side of the initial uniform grid.
    pub initial_grid: usize,
    /// Hard cap on processed cells; hitting it leaves a wider certificate.
    pub max_cells: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            feasibility: 1e-6,
            price_resolution: 1e-4,
            objective_gap: 1e-3,
            initial_grid: 16,
            max_cells: 2_000_000,
        }
    }
}

/// Per-solve record of how global optimality was established.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimalityCertificate {
    /// Width of the finest cell examined, USD.
    pub grid_resolution: f64,
    pub incumbent_objective: f64,
    /// Incumbent objective minus the smallest lower bound of any cell that
    /// was not discarded. Never negative.
    pub lower_bound_gap: f64,
    /// Deepest subdivision level reached below the initial grid.
    pub refinement_rounds: u32,
    pub cells_processed: usize,
    /// False when the cell cap stopped the search early.
    pub complete: bool,
}

/// A constraint of the negotiation program, written as `g(p) <= 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Constraint {
    PublicDemand,
    TargetProfit(Manufacturer),
    Capacity(Manufacturer),
    Surplus(Manufacturer),
    NonNegativeQuantity(Manufacturer),
    NonNegativePrice(Manufacturer),
}

impl Constraint {
    pub const ALL: [Constraint; 11] = [
        Constraint::PublicDemand,
        Constraint::TargetProfit(Manufacturer::First),
        Constraint::TargetProfit(Manufacturer::Second),
        Constraint::Capacity(Manufacturer::First),
        Constraint::Capacity(Manufacturer::Second),
        Constraint::Surplus(Manufacturer::First),
        Constraint::Surplus(Manufacturer::Second),
        Constraint::NonNegativeQuantity(Manufacturer::First),
        Constraint::NonNegativeQuantity(Manufacturer::Second),
        Constraint::NonNegativePrice(Manufacturer::First),
        Constraint::NonNegativePrice(Manufacturer::Second),
    ];
}

/// Everything [`evaluate_point`] derives from a price pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PointEvaluation {
    pub p_pub: [f64; 2],
    pub q_pub: [f64; 2],
    pub z: f64,
    pub objective: f64,
    /// Public plus private profit, millions of USD.
    pub profit: [f64; 2],
    pub max_violation: f64,
    /// The most violated constraint, if any is violated.
    pub worst: Option<Constraint>,
}

impl PointEvaluation {
    pub fn is_feasible(&self, tol: &Tolerances) -> bool {
        self.max_violation <= tol.feasibility
    }
}

/// The negotiation program for one scenario, reduced to the price square.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedProblem {
    pub curve: DemandCurve,
    pub equilibrium: PrivateEquilibrium,
    pub scenario: ScenarioConfig,
    /// Upper edge of the price box: `2 a_pub / (b - c)`.
    pub p_max: f64,
}

impl ReducedProblem {
    pub fn new(
        curve: DemandCurve,
        equilibrium: PrivateEquilibrium,
        scenario: ScenarioConfig,
    ) -> Result<Self> {
        let eq_fields = [
            equilibrium.p_priv,
            equilibrium.q_priv,
            equilibrium.surplus_bound,
        ];
        if !eq_fields.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite("private equilibrium"));
        }
        scenario.validate()?;
        curve.validate()?;
        let p_max = 2.0 * curve.a_pub / (curve.b - curve.c);
        if !(p_max.is_finite() && p_max > 0.0) {
            return Err(Error::Domain("price box is degenerate".into()));
        }
        Ok(ReducedProblem {
            curve,
            equilibrium,
            scenario,
            p_max,
        })
    }

    /// Runs demand estimation and the private equilibrium for `scenario`.
    pub fn from_scenario(records: &[HistoricalRecord], scenario: &ScenarioConfig) -> Result<Self> {
        scenario.validate()?;
        let curve = DemandCurve::estimate(records, scenario)?;
        let equilibrium = PrivateEquilibrium::for_scenario(&curve, scenario)?;
        ReducedProblem::new(curve, equilibrium, scenario.clone())
    }

    pub fn public_quantities(&self, p: [f64; 2]) -> [f64; 2] {
        let DemandCurve { a_pub, b, c, .. } = self.curve;
        [a_pub - b * p[0] + c * p[1], a_pub - b * p[1] + c * p[0]]
    }

    pub fn objective(&self, p: [f64; 2]) -> f64 {
        let q = self.public_quantities(p);
        let mu = self.scenario.mu;
        mu * (q[0] * p[0] + q[1] * p[1]) + (1.0 - mu) * (p[0] - p[1]).abs()
    }

    pub fn profits(&self, p: [f64; 2], q: [f64; 2]) -> [f64; 2] {
        let PrivateEquilibrium { p_priv, q_priv, .. } = self.equilibrium;
        let d = self.scenario.unit_costs();
        [0, 1].map(|i| q_priv * (p_priv - d[i]) + q[i] * (p[i] - d[i]))
    }

    /// Signed value of `g(p)`; positive means violated.
    pub fn constraint_value(&self, k: Constraint, p: [f64; 2]) -> f64 {
        let q = self.public_quantities(p);
        let eq = &self.equilibrium;
        match k {
            Constraint::PublicDemand => {
                self.scenario.r_pub * self.scenario.total_demand - (q[0] + q[1])
            }
            Constraint::TargetProfit(m) => {
                self.scenario.params(m).target_profit - self.profits(p, q)[m.index()]
            }
            Constraint::Capacity(m) => q[m.index()] + eq.q_priv - self.scenario.params(m).capacity,
            Constraint::Surplus(m) => {
                q[m.index()] - (self.scenario.params(m).capacity - eq.surplus_bound)
            }
            Constraint::NonNegativeQuantity(m) => -q[m.index()],
            Constraint::NonNegativePrice(m) => -p[m.index()],
        }
    }

    /// Gradient of `g` with respect to the price pair.
    pub fn constraint_gradient(&self, k: Constraint, p: [f64; 2]) -> [f64; 2] {
        let DemandCurve { b, c, .. } = self.curve;
        // d q_i / d p for manufacturer i
        let dq = |i: usize| if i == 0 { [-b, c] } else { [c, -b] };
        match k {
            Constraint::PublicDemand => [b - c, b - c],
            Constraint::TargetProfit(m) => {
                let i = m.index();
                let q = self.public_quantities(p)[i];
                let margin = p[i] - self.scenario.params(m).unit_cost;
                let g = dq(i);
                let mut grad = [-g[0] * margin, -g[1] * margin];
                grad[i] -= q;
                grad
            }
            Constraint::Capacity(m) | Constraint::Surplus(m) => dq(m.index()),
            Constraint::NonNegativeQuantity(m) => dq(m.index()).map(|v| -v),
            Constraint::NonNegativePrice(m) => {
                let mut g = [0.0, 0.0];
                g[m.index()] = -1.0;
                g
            }
        }
    }

    /// Gradient of the objective on the side of the diagonal given by `side`
    /// (`+1` where `p1 > p2`, `-1` where `p1 < p2`).
    pub(crate) fn objective_gradient(&self, p: [f64; 2], side: f64) -> [f64; 2] {
        let DemandCurve { a_pub, b, c, .. } = self.curve;
        let mu = self.scenario.mu;
        let kink = (1.0 - mu) * side;
        [
            mu * (a_pub - 2.0 * b * p[0] + 2.0 * c * p[1]) + kink,
            mu * (a_pub - 2.0 * b * p[1] + 2.0 * c * p[0]) - kink,
        ]
    }
}

/// Quantities, objective, profits and worst violation at a price pair.
pub fn evaluate_point(problem: &ReducedProblem, p: [f64; 2]) -> PointEvaluation {
    let q = problem.public_quantities(p);
    let mut max_violation = 0.0;
    let mut worst = None;
    for k in Constraint::ALL {
        let g = problem.constraint_value(k, p);
        if g > max_violation {
            max_violation = g;
            worst = Some(k);
        }
    }
    PointEvaluation {
        p_pub: p,
        q_pub: q,
        z: (p[0] - p[1]).abs(),
        objective: problem.objective(p),
        profit: problem.profits(p, q),
        max_violation,
        worst,
    }
}

/// Lexicographic preference among feasible points: objective, then price
/// gap, then first price. Objectives within `tie` count as equal.
pub(crate) fn prefer(cand: &PointEvaluation, best: &PointEvaluation, tie: f64) -> bool {
    if cand.objective < best.objective - tie {
        return true;
    }
    if cand.objective > best.objective + tie {
        return false;
    }
    if cand.z != best.z {
        return cand.z < best.z;
    }
    cand.p_pub[0] < best.p_pub[0]
}

pub(crate) fn tie_tolerance(objective: f64) -> f64 {
    1e-9 * objective.abs().max(1.0)
}
