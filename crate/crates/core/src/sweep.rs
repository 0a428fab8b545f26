//! Scenario sweeps: run the pipeline over a grid, classify, aggregate.

use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::demand::HistoricalRecord;
use crate::market::{Manufacturer, ScenarioConfig, SolveStatus, SweepSummary};
use crate::negotiation::{solve, ReducedProblem, Tolerances};
use crate::par::{self, Parallelism};
use crate::{Error, Result};

pub const SWEEP_HEADER: [&str; 17] = [
    "scenario_id",
    "D",
    "gamma",
    "P_pf",
    "P_mod",
    "d_pf",
    "d_mod",
    "status",
    "p_pub_pf",
    "p_pub_mod",
    "q_pub_pf",
    "q_pub_mod",
    "p_priv",
    "q_priv",
    "profit_pf",
    "profit_mod",
    "objective",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RowStatus {
    Interior,
    Boundary,
    Infeasible,
    /// The pipeline failed for this scenario.
    Error,
}

impl RowStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            RowStatus::Interior => "INTERIOR",
            RowStatus::Boundary => "BOUNDARY",
            RowStatus::Infeasible => "INFEASIBLE",
            RowStatus::Error => "ERROR",
        }
    }
}

impl From<SolveStatus> for RowStatus {
    fn from(s: SolveStatus) -> Self {
        match s {
            SolveStatus::Interior => RowStatus::Interior,
            SolveStatus::Boundary => RowStatus::Boundary,
            SolveStatus::Infeasible => RowStatus::Infeasible,
        }
    }
}

impl fmt::Display for RowStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RowStatus {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "INTERIOR" => Ok(RowStatus::Interior),
            "BOUNDARY" => Ok(RowStatus::Boundary),
            "INFEASIBLE" => Ok(RowStatus::Infeasible),
            "ERROR" => Ok(RowStatus::Error),
            other => Err(format!("unknown status `{other}`")),
        }
    }
}

/// One scenario's outcome. Numeric outputs are NaN on error rows; on
/// infeasible rows they describe the least-violating point.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResultRow {
    pub scenario_id: u32,
    pub total_demand: f64,
    pub gamma: f64,
    pub target_profit: [f64; 2],
    pub unit_cost: [f64; 2],
    pub status: RowStatus,
    pub p_pub: [f64; 2],
    pub q_pub: [f64; 2],
    pub p_priv: f64,
    pub q_priv: f64,
    pub profit: [f64; 2],
    pub objective: f64,
    pub error: Option<String>,
}

impl SweepResultRow {
    fn from_config(cfg: &ScenarioConfig) -> Self {
        SweepResultRow {
            scenario_id: cfg.scenario_id,
            total_demand: cfg.total_demand,
            gamma: cfg.gamma,
            target_profit: cfg.target_profits(),
            unit_cost: cfg.unit_costs(),
            status: RowStatus::Error,
            p_pub: [f64::NAN; 2],
            q_pub: [f64::NAN; 2],
            p_priv: f64::NAN,
            q_priv: f64::NAN,
            profit: [f64::NAN; 2],
            objective: f64::NAN,
            error: None,
        }
    }
}

/// Full pipeline for one scenario.
pub fn run_scenario(
    cfg: &ScenarioConfig,
    historical: &[HistoricalRecord],
    tol: &Tolerances,
) -> SweepResultRow {
    let mut row = SweepResultRow::from_config(cfg);
    let outcome = ReducedProblem::from_scenario(historical, cfg)
        .and_then(|prob| solve(&prob, tol).map(|sol| (prob, sol)));
    match outcome {
        Ok((prob, sol)) => {
            row.status = sol.status.into();
            row.p_pub = sol.p_pub;
            row.q_pub = sol.q_pub;
            row.p_priv = prob.equilibrium.p_priv;
            row.q_priv = prob.equilibrium.q_priv;
            row.profit = sol.realized_profit;
            row.objective = sol.objective;
        }
        Err(e) => row.error = Some(e.to_string()),
    }
    row
}

/// Runs every scenario; rows come back in scenario-id order whatever the
/// number of jobs. A failing scenario yields an `ERROR` row.
pub fn run_sweep(
    grid: &[ScenarioConfig],
    historical: &[HistoricalRecord],
    jobs: usize,
    tol: &Tolerances,
) -> Result<Vec<SweepResultRow>> {
    if grid.is_empty() {
        return Err(Error::InvalidConfig("scenario grid is empty".into()));
    }
    if historical.is_empty() {
        return Err(Error::NoDataRows);
    }
    let mut rows = par::map(grid, Parallelism::from_jobs(jobs), |cfg| {
        run_scenario(cfg, historical, tol)
    });
    rows.sort_by_key(|r| r.scenario_id);
    Ok(rows)
}

/// Closed price interval in USD.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PriceBand {
    pub lo: f64,
    pub hi: f64,
}

impl PriceBand {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo >= hi {
            return Err(Error::Domain(format!("price band {lo}:{hi} is empty")));
        }
        Ok(PriceBand { lo, hi })
    }

    pub fn contains(&self, p: f64) -> bool {
        p >= self.lo && p <= self.hi
    }

    pub fn unbounded() -> Self {
        PriceBand {
            lo: 0.0,
            hi: f64::INFINITY,
        }
    }

    /// Media-speculated public price ranges: $34-44 and $45-55 per regimen.
    pub fn defaults() -> [PriceBand; 2] {
        [
            PriceBand { lo: 34.0, hi: 44.0 },
            PriceBand { lo: 45.0, hi: 55.0 },
        ]
    }
}

impl FromStr for PriceBand {
    type Err = Error;

    /// `lo:hi`, either end may be `inf`.
    fn from_str(s: &str) -> Result<Self> {
        let (lo, hi) = s
            .split_once(':')
            .ok_or_else(|| Error::Domain(format!("price band `{s}` must look like lo:hi")))?;
        let parse = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::Domain(format!("price band `{s}`: `{t}` is not a number")))
        };
        PriceBand::new(parse(lo)?, parse(hi)?)
    }
}

impl fmt::Display for PriceBand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.lo, self.hi)
    }
}

/// Interior rows whose public prices fall in both bands, by scenario id.
pub fn filter_by_band(
    rows: &[SweepResultRow],
    band_1: PriceBand,
    band_2: PriceBand,
) -> Vec<SweepResultRow> {
    let mut out: Vec<SweepResultRow> = rows
        .iter()
        .filter(|r| {
            r.status == RowStatus::Interior
                && band_1.contains(r.p_pub[0])
                && band_2.contains(r.p_pub[1])
        })
        .cloned()
        .collect();
    out.sort_by_key(|r| r.scenario_id);
    out
}

pub fn summarize(rows: &[SweepResultRow], bands: [PriceBand; 2]) -> SweepSummary {
    let count = |s: RowStatus| rows.iter().filter(|r| r.status == s).count();
    let n_interior = count(RowStatus::Interior);
    let n_boundary = count(RowStatus::Boundary);
    let n_infeasible = count(RowStatus::Infeasible);
    let centroid = (n_interior > 0).then(|| {
        let mut sum = [0.0; 2];
        for r in rows.iter().filter(|r| r.status == RowStatus::Interior) {
            sum[0] += r.p_pub[0];
            sum[1] += r.p_pub[1];
        }
        sum.map(|s| s / n_interior as f64)
    });
    SweepSummary {
        n_total: n_interior + n_boundary + n_infeasible,
        n_infeasible,
        n_boundary,
        n_interior,
        n_error: count(RowStatus::Error),
        centroid,
        band_matches: filter_by_band(rows, bands[0], bands[1])
            .iter()
            .map(|r| r.scenario_id)
            .collect(),
    }
}

/// Mean interior public price of `m` at each of its unit-cost levels,
/// ascending by cost: `(cost, mean, count)`.
pub fn mean_price_by_cost(rows: &[SweepResultRow], m: Manufacturer) -> Vec<(f64, f64, usize)> {
    let i = m.index();
    group_means(
        rows.iter()
            .filter(|r| r.status == RowStatus::Interior)
            .map(|r| (r.unit_cost[i], r.p_pub[i])),
    )
}

/// Mean interior price `(p1 + p2) / 2` at each total-demand level.
pub fn mean_price_by_demand(rows: &[SweepResultRow]) -> Vec<(f64, f64, usize)> {
    group_means(
        rows.iter()
            .filter(|r| r.status == RowStatus::Interior)
            .map(|r| (r.total_demand, (r.p_pub[0] + r.p_pub[1]) / 2.0)),
    )
}

fn group_means(pairs: impl Iterator<Item = (f64, f64)>) -> Vec<(f64, f64, usize)> {
    let mut groups: Vec<(f64, f64, usize)> = Vec::new();
    for (key, v) in pairs {
        match groups.iter_mut().find(|g| g.0 == key) {
            Some(g) => {
                g.1 += v;
                g.2 += 1;
            }
            None => groups.push((key, v, 1)),
        }
    }
    groups.sort_by(|a, b| a.0.total_cmp(&b.0));
    groups
        .into_iter()
        .map(|(k, s, n)| (k, s / n as f64, n))
        .collect()
}

fn fmt_num(v: f64) -> String {
    if v.is_nan() {
        String::new()
    } else {
        format!("{v}")
    }
}

pub fn write_rows_csv<W: Write>(rows: &[SweepResultRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SWEEP_HEADER)?;
    for r in rows {
        let mut rec = vec![r.scenario_id.to_string()];
        rec.extend(
            [
                r.total_demand,
                r.gamma,
                r.target_profit[0],
                r.target_profit[1],
                r.unit_cost[0],
                r.unit_cost[1],
            ]
            .map(fmt_num),
        );
        rec.push(r.status.to_string());
        rec.extend(
            [
                r.p_pub[0],
                r.p_pub[1],
                r.q_pub[0],
                r.q_pub[1],
                r.p_priv,
                r.q_priv,
                r.profit[0],
                r.profit[1],
                r.objective,
            ]
            .map(fmt_num),
        );
        w.write_record(&rec)?;
    }
    w.flush().map_err(|e| Error::io("<sweep output>", e))?;
    Ok(())
}

/// Reads a sweep CSV written by [`write_rows_csv`]. Row numbers in errors
/// are 1-based data rows.
pub fn read_rows_csv<R: Read>(input: R) -> Result<Vec<SweepResultRow>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(input);
    let mut records = rdr.records();
    let header = match records.next() {
        None => return Err(Error::NoDataRows),
        Some(h) => h?,
    };
    if header.len() != SWEEP_HEADER.len() || header.iter().zip(SWEEP_HEADER).any(|(a, b)| a != b) {
        return Err(Error::MalformedRow {
            row: 0,
            column: "header".into(),
            message: format!("expected `{}`", SWEEP_HEADER.join(",")),
        });
    }
    let mut rows = Vec::new();
    for (idx, rec) in records.enumerate() {
        let row = idx + 1;
        let rec = rec?;
        if rec.len() != SWEEP_HEADER.len() {
            return Err(Error::MalformedRow {
                row,
                column: "*".into(),
                message: format!(
                    "expected {} columns, found {}",
                    SWEEP_HEADER.len(),
                    rec.len()
                ),
            });
        }
        let bad = |col: usize, message: String| Error::MalformedRow {
            row,
            column: SWEEP_HEADER[col].into(),
            message,
        };
        let num = |col: usize| -> Result<f64> {
            let t = &rec[col];
            if t.is_empty() {
                return Ok(f64::NAN);
            }
            t.parse()
                .map_err(|_| bad(col, format!("`{t}` is not a number")))
        };
        let scenario_id = rec[0]
            .parse()
            .map_err(|_| bad(0, format!("`{}` is not an id", &rec[0])))?;
        let status = rec[7].parse::<RowStatus>().map_err(|m| bad(7, m))?;
        rows.push(SweepResultRow {
            scenario_id,
            total_demand: num(1)?,
            gamma: num(2)?,
            target_profit: [num(3)?, num(4)?],
            unit_cost: [num(5)?, num(6)?],
            status,
            p_pub: [num(8)?, num(9)?],
            q_pub: [num(10)?, num(11)?],
            p_priv: num(12)?,
            q_priv: num(13)?,
            profit: [num(14)?, num(15)?],
            objective: num(16)?,
            error: None,
        });
    }
    if rows.is_empty() {
        return Err(Error::NoDataRows);
    }
    Ok(rows)
}

/// Interior `(p_pub_pf, p_pub_mod, D)` triples: the public-price scatter
/// banded by total demand.
pub fn write_price_pairs_csv<W: Write>(rows: &[SweepResultRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["scenario_id", "p_pub_pf", "p_pub_mod", "D"])?;
    for r in rows.iter().filter(|r| r.status == RowStatus::Interior) {
        w.write_record([
            r.scenario_id.to_string(),
            fmt_num(r.p_pub[0]),
            fmt_num(r.p_pub[1]),
            fmt_num(r.total_demand),
        ])?;
    }
    w.flush().map_err(|e| Error::io("<price pairs>", e))?;
    Ok(())
}

/// Interior public prices per manufacturer, keyed by that manufacturer's
/// unit cost (long format, one line per manufacturer and scenario).
pub fn write_cost_levels_csv<W: Write>(rows: &[SweepResultRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["manufacturer", "unit_cost_usd", "scenario_id", "p_pub"])?;
    for m in Manufacturer::ALL {
        let tag = ["pf", "mod"][m.index()];
        for r in rows.iter().filter(|r| r.status == RowStatus::Interior) {
            w.write_record([
                tag.to_string(),
                fmt_num(r.unit_cost[m.index()]),
                r.scenario_id.to_string(),
                fmt_num(r.p_pub[m.index()]),
            ])?;
        }
    }
    w.flush().map_err(|e| Error::io("<cost levels>", e))?;
    Ok(())
}
