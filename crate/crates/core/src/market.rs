//! Domain types shared by every stage of the pipeline, plus the default
//! scenario grid.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::negotiation::OptimalityCertificate;
use crate::{Error, Result};

/// Prices or quantities at or below this value count as zero when
/// classifying a solution as interior (1,000 regimens, or $0.001).
pub const INTERIORITY_THRESHOLD: f64 = 1e-3;

/// Public-sector share of total demand used by the default grid.
pub const BASE_PUBLIC_SHARE: f64 = 0.57;
/// Weight on public expenditure in the negotiation objective.
pub const BASE_OBJECTIVE_WEIGHT: f64 = 0.9;
/// Order-of-magnitude gap between prices and quantities.
pub const BASE_MAGNITUDE_EXPONENT: i32 = 6;
/// Capacities in millions of regimens.
pub const BASE_CAPACITY: [f64; 2] = [250.0, 200.0];
pub const BASE_LABELS: [&str; 2] = ["Pfizer", "Moderna"];

pub const GRID_TOTAL_DEMAND: [f64; 3] = [157.05, 174.5, 191.95];
pub const GRID_GAMMA: [f64; 3] = [0.25, 0.50, 0.75];
pub const GRID_TARGET_PROFIT_M1: [f64; 3] = [25.7, 234.0, 2570.0];
pub const GRID_TARGET_PROFIT_M2: [f64; 3] = [41.4, 496.0, 2570.0];
pub const GRID_UNIT_COST: [f64; 4] = [0.0, 6.60, 23.44, 31.96];

/// One of the two competing manufacturers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Manufacturer {
    First,
    Second,
}

impl Manufacturer {
    pub const ALL: [Manufacturer; 2] = [Manufacturer::First, Manufacturer::Second];

    pub fn index(self) -> usize {
        match self {
            Manufacturer::First => 0,
            Manufacturer::Second => 1,
        }
    }

    /// 1-based id as used in column names (`m1`, `m2`).
    pub fn id(self) -> u8 {
        self.index() as u8 + 1
    }

    pub fn rival(self) -> Manufacturer {
        match self {
            Manufacturer::First => Manufacturer::Second,
            Manufacturer::Second => Manufacturer::First,
        }
    }

    pub fn default_label(self) -> &'static str {
        BASE_LABELS[self.index()]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManufacturerParams {
    pub label: String,
    #[serde(rename = "capacity_millions")]
    pub capacity: f64,
    #[serde(rename = "target_profit_millions")]
    pub target_profit: f64,
    #[serde(rename = "unit_cost_usd")]
    pub unit_cost: f64,
}

impl ManufacturerParams {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("capacity_millions", self.capacity),
            ("target_profit_millions", self.target_profit),
            ("unit_cost_usd", self.unit_cost),
        ] {
            if !v.is_finite() {
                return Err(Error::InvalidConfig(format!(
                    "{}: {name} must be finite",
                    self.label
                )));
            }
        }
        if self.capacity <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "{}: capacity_millions must be positive",
                self.label
            )));
        }
        if self.target_profit < 0.0 {
            return Err(Error::InvalidConfig(format!(
                "{}: target_profit_millions must be non-negative",
                self.label
            )));
        }
        if self.unit_cost < 0.0 {
            return Err(Error::InvalidConfig(format!(
                "{}: unit_cost_usd must be non-negative",
                self.label
            )));
        }
        Ok(())
    }
}

/// A complete parameterization of the market. Serializes to the scenario
/// configuration file format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    #[serde(default)]
    pub scenario_id: u32,
    #[serde(rename = "total_demand_millions")]
    pub total_demand: f64,
    pub gamma: f64,
    pub k: i32,
    pub r_pub: f64,
    pub mu: f64,
    pub manufacturers: [ManufacturerParams; 2],
}

impl ScenarioConfig {
    /// Scenario with the fixed base values (capacities, sector split,
    /// objective weight, magnitude exponent) and the six swept factors.
    pub fn with_factors(
        scenario_id: u32,
        total_demand: f64,
        gamma: f64,
        target_profit: [f64; 2],
        unit_cost: [f64; 2],
    ) -> Self {
        let params = |m: Manufacturer| ManufacturerParams {
            label: m.default_label().to_string(),
            capacity: BASE_CAPACITY[m.index()],
            target_profit: target_profit[m.index()],
            unit_cost: unit_cost[m.index()],
        };
        ScenarioConfig {
            scenario_id,
            total_demand,
            gamma,
            k: BASE_MAGNITUDE_EXPONENT,
            r_pub: BASE_PUBLIC_SHARE,
            mu: BASE_OBJECTIVE_WEIGHT,
            manufacturers: [params(Manufacturer::First), params(Manufacturer::Second)],
        }
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let cfg: ScenarioConfig = serde_json::from_str(s)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json_str(&text)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("total_demand_millions", self.total_demand),
            ("gamma", self.gamma),
            ("r_pub", self.r_pub),
            ("mu", self.mu),
        ] {
            if !v.is_finite() {
                return Err(Error::InvalidConfig(format!("{name} must be finite")));
            }
        }
        if self.total_demand <= 0.0 {
            return Err(Error::InvalidConfig(
                "total_demand_millions must be positive".into(),
            ));
        }
        if !(self.gamma > 0.0 && self.gamma < 1.0) {
            return Err(Error::Domain("gamma must lie in (0,1)".into()));
        }
        if !(self.r_pub > 0.0 && self.r_pub < 1.0) {
            return Err(Error::InvalidConfig("r_pub must lie in (0,1)".into()));
        }
        if !(0.0..=1.0).contains(&self.mu) {
            return Err(Error::InvalidConfig("mu must lie in [0,1]".into()));
        }
        for p in &self.manufacturers {
            p.validate()?;
        }
        Ok(())
    }

    pub fn r_priv(&self) -> f64 {
        1.0 - self.r_pub
    }

    pub fn params(&self, m: Manufacturer) -> &ManufacturerParams {
        &self.manufacturers[m.index()]
    }

    pub fn unit_costs(&self) -> [f64; 2] {
        [
            self.manufacturers[0].unit_cost,
            self.manufacturers[1].unit_cost,
        ]
    }

    pub fn target_profits(&self) -> [f64; 2] {
        [
            self.manufacturers[0].target_profit,
            self.manufacturers[1].target_profit,
        ]
    }

    pub fn capacities(&self) -> [f64; 2] {
        [
            self.manufacturers[0].capacity,
            self.manufacturers[1].capacity,
        ]
    }

    /// The same market with the two manufacturers relabeled.
    pub fn swapped(&self) -> Self {
        let mut out = self.clone();
        out.manufacturers.swap(0, 1);
        out
    }
}

/// Linear demand curve `q_i = a - b p_i + c p_j`, one intercept per sector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DemandCurve {
    pub a_pub: f64,
    pub a_priv: f64,
    pub b: f64,
    pub c: f64,
}

impl DemandCurve {
    pub fn new(a_pub: f64, a_priv: f64, b: f64, c: f64) -> Result<Self> {
        let curve = DemandCurve {
            a_pub,
            a_priv,
            b,
            c,
        };
        curve.validate()?;
        Ok(curve)
    }

    pub fn validate(&self) -> Result<()> {
        if ![self.a_pub, self.a_priv, self.b, self.c]
            .iter()
            .all(|v| v.is_finite())
        {
            return Err(Error::NonFinite("demand curve coefficient"));
        }
        if self.a_pub <= 0.0 || self.a_priv <= 0.0 {
            return Err(Error::Domain("demand intercepts must be positive".into()));
        }
        if !(self.b > self.c && self.c > 0.0) {
            return Err(Error::Domain("demand slopes must satisfy b > c > 0".into()));
        }
        Ok(())
    }
}

/// Symmetric private-sector equilibrium shared by both manufacturers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrivateEquilibrium {
    pub p_priv: f64,
    #[serde(rename = "q_priv_millions")]
    pub q_priv: f64,
    #[serde(rename = "surplus_bound_millions")]
    pub surplus_bound: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SolveStatus {
    /// Both public prices and quantities strictly positive.
    Interior,
    /// Feasible, but some public price or quantity is (numerically) zero.
    Boundary,
    Infeasible,
}

impl SolveStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SolveStatus::Interior => "INTERIOR",
            SolveStatus::Boundary => "BOUNDARY",
            SolveStatus::Infeasible => "INFEASIBLE",
        }
    }

    pub fn classify(p_pub: [f64; 2], q_pub: [f64; 2]) -> SolveStatus {
        let all_positive = p_pub
            .iter()
            .chain(q_pub.iter())
            .all(|&v| v > INTERIORITY_THRESHOLD);
        if all_positive {
            SolveStatus::Interior
        } else {
            SolveStatus::Boundary
        }
    }

    pub fn is_feasible(self) -> bool {
        self != SolveStatus::Infeasible
    }
}

/// Outcome of the public-sector negotiation. For an infeasible scenario the
/// prices are the least-violating point found, reported as a diagnostic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NegotiationSolution {
    pub status: SolveStatus,
    pub p_pub: [f64; 2],
    pub q_pub: [f64; 2],
    pub z: f64,
    pub objective: f64,
    pub realized_profit: [f64; 2],
    pub max_violation: f64,
    pub certificate_gap: f64,
    pub certificate: OptimalityCertificate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub n_total: usize,
    pub n_infeasible: usize,
    pub n_boundary: usize,
    pub n_interior: usize,
    /// Rows whose pipeline failed; excluded from every other statistic.
    pub n_error: usize,
    /// Mean public price pair over interior rows; `None` when there are none.
    pub centroid: Option<[f64; 2]>,
    pub band_matches: Vec<u32>,
}

/// The full factorial grid: demand x similarity x both target profits x
/// both unit costs, 1,296 scenarios. Ids run from 1 in lexicographic order
/// of the factor lists, the last factor varying fastest.
pub fn default_sweep_grid() -> Vec<ScenarioConfig> {
    let mut grid = Vec::with_capacity(1296);
    let mut id = 0u32;
    for &d_total in &GRID_TOTAL_DEMAND {
        for &gamma in &GRID_GAMMA {
            for &p1 in &GRID_TARGET_PROFIT_M1 {
                for &p2 in &GRID_TARGET_PROFIT_M2 {
                    for &c1 in &GRID_UNIT_COST {
                        for &c2 in &GRID_UNIT_COST {
                            id += 1;
                            grid.push(ScenarioConfig::with_factors(
                                id,
                                d_total,
                                gamma,
                                [p1, p2],
                                [c1, c2],
                            ));
                        }
                    }
                }
            }
        }
    }
    grid
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_has_all_combinations() {
        let grid = default_sweep_grid();
        assert_eq!(grid.len(), 1296);
        assert_eq!(3 * 3 * 3 * 3 * 4 * 4, 1296);
        for (i, cfg) in grid.iter().enumerate() {
            assert_eq!(cfg.scenario_id as usize, i + 1);
            cfg.validate().unwrap();
        }
    }

    #[test]
    fn grid_order_is_lexicographic() {
        let grid = default_sweep_grid();
        let first = &grid[0];
        assert_eq!(first.total_demand, 157.05);
        assert_eq!(first.gamma, 0.25);
        assert_eq!(first.target_profits(), [25.7, 41.4]);
        assert_eq!(first.unit_costs(), [0.0, 0.0]);
        assert_eq!(grid[1].unit_costs(), [0.0, 6.60]);
        assert_eq!(grid[4].unit_costs(), [6.60, 0.0]);
        let last = &grid[1295];
        assert_eq!(last.total_demand, 191.95);
        assert_eq!(last.gamma, 0.75);
        assert_eq!(last.target_profits(), [2570.0, 2570.0]);
        assert_eq!(last.unit_costs(), [31.96, 31.96]);
        // stable across calls
        assert_eq!(grid, default_sweep_grid());
    }

    #[test]
    fn grid_fixed_parameters() {
        for cfg in default_sweep_grid() {
            assert_eq!(cfg.capacities(), [250.0, 200.0]);
            assert_eq!(cfg.r_pub, 0.57);
            assert_eq!(cfg.mu, 0.9);
            assert_eq!(cfg.k, 6);
            assert!((cfg.r_priv() - 0.43).abs() < 1e-15);
        }
    }

    #[test]
    fn config_json_uses_normative_names() {
        let text = r#"{
            "total_demand_millions": 157.05,
            "gamma": 0.75,
            "k": 6,
            "r_pub": 0.57,
            "mu": 0.9,
            "manufacturers": [
                {"label": "Pfizer", "capacity_millions": 250, "target_profit_millions": 234, "unit_cost_usd": 31.96},
                {"label": "Moderna", "capacity_millions": 200, "target_profit_millions": 41.4, "unit_cost_usd": 31.96}
            ]
        }"#;
        let cfg = ScenarioConfig::from_json_str(text).unwrap();
        assert_eq!(cfg.scenario_id, 0);
        assert_eq!(cfg.target_profits(), [234.0, 41.4]);
        assert_eq!(cfg.params(Manufacturer::Second).label, "Moderna");
        let back: serde_json::Value = serde_json::to_value(&cfg).unwrap();
        assert!(back.get("total_demand_millions").is_some());
        assert!(back["manufacturers"][0].get("unit_cost_usd").is_some());
    }

    #[test]
    fn config_rejects_bad_values() {
        let mut cfg = ScenarioConfig::with_factors(1, 174.5, 0.5, [1.0, 1.0], [0.0, 0.0]);
        cfg.gamma = 1.0;
        assert!(matches!(cfg.validate(), Err(Error::Domain(_))));
        cfg.gamma = 0.5;
        cfg.manufacturers[1].capacity = 0.0;
        assert!(cfg.validate().is_err());
        cfg.manufacturers[1].capacity = 10.0;
        cfg.mu = 1.5;
        assert!(cfg.validate().is_err());
        cfg.mu = 1.0;
        cfg.total_demand = f64::NAN;
        assert!(cfg.validate().is_err());
        // only two manufacturers are accepted
        let three = r#"{"total_demand_millions":1,"gamma":0.5,"k":6,"r_pub":0.5,"mu":0.5,
            "manufacturers":[
              {"label":"a","capacity_millions":1,"target_profit_millions":0,"unit_cost_usd":0},
              {"label":"b","capacity_millions":1,"target_profit_millions":0,"unit_cost_usd":0},
              {"label":"c","capacity_millions":1,"target_profit_millions":0,"unit_cost_usd":0}]}"#;
        assert!(ScenarioConfig::from_json_str(three).is_err());
    }

    #[test]
    fn classification_threshold() {
        assert_eq!(
            SolveStatus::classify([40.0, 50.0], [70.0, 20.0]),
            SolveStatus::Interior
        );
        assert_eq!(
            SolveStatus::classify([40.0, 50.0], [70.0, 1e-3]),
            SolveStatus::Boundary
        );
        assert_eq!(
            SolveStatus::classify([0.0, 50.0], [70.0, 20.0]),
            SolveStatus::Boundary
        );
    }

    #[test]
    fn swapping_relabels_manufacturers() {
        let cfg = ScenarioConfig::with_factors(7, 174.5, 0.5, [25.7, 496.0], [0.0, 23.44]);
        let s = cfg.swapped();
        assert_eq!(s.target_profits(), [496.0, 25.7]);
        assert_eq!(s.capacities(), [200.0, 250.0]);
        assert_eq!(s.swapped(), cfg);
        assert_eq!(Manufacturer::First.rival(), Manufacturer::Second);
        assert_eq!(Manufacturer::Second.id(), 2);
    }
}
