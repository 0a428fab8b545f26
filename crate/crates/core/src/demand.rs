//! Demand-curve estimation from historical two-manufacturer price data.
//!
//! Historical flu-vaccine records stand in for the new market: one dose per
//! person maps to one two-dose regimen, per-dose prices are doubled, and the
//! scenario's unit costs are added before averaging over years.

use std::io::Read;
use std::path::Path;

use crate::market::{DemandCurve, ScenarioConfig};
use crate::{Error, Result};

pub const HISTORICAL_HEADER: [&str; 6] = [
    "year",
    "pub_price_m1",
    "pub_price_m2",
    "priv_price_m1",
    "priv_price_m2",
    "total_demand_millions",
];

const BUNDLED_CSV: &str = include_str!("../data/flu_prices.csv");

/// One contract year of per-dose prices by sector and manufacturer.
#[derive(Debug, Clone, PartialEq)]
pub struct HistoricalRecord {
    pub year_label: String,
    /// USD per dose, indexed by manufacturer.
    pub pub_price: [f64; 2],
    pub priv_price: [f64; 2],
    /// Millions of doses, both sectors and manufacturers combined.
    pub total_demand: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sector {
    Public,
    Private,
}

impl HistoricalRecord {
    pub fn prices(&self, sector: Sector) -> [f64; 2] {
        match sector {
            Sector::Public => self.pub_price,
            Sector::Private => self.priv_price,
        }
    }
}

/// The bundled 2010-11 through 2019-20 flu price table.
pub fn bundled_historical() -> Vec<HistoricalRecord> {
    parse_historical(BUNDLED_CSV.as_bytes()).expect("bundled historical data is well formed")
}

pub fn bundled_historical_csv() -> &'static str {
    BUNDLED_CSV
}

pub fn load_historical(path: impl AsRef<Path>) -> Result<Vec<HistoricalRecord>> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    parse_historical(file)
}

/// Parses the historical CSV. Row numbers in errors are 1-based data rows
/// (the header is row 0).
pub fn parse_historical<R: Read>(reader: R) -> Result<Vec<HistoricalRecord>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut rows = rdr.records();

    let header = match rows.next() {
        None => return Err(Error::NoDataRows),
        Some(h) => h?,
    };
    if header.len() != HISTORICAL_HEADER.len()
        || header.iter().zip(HISTORICAL_HEADER).any(|(a, b)| a != b)
    {
        return Err(Error::MalformedRow {
            row: 0,
            column: "header".into(),
            message: format!("expected `{}`", HISTORICAL_HEADER.join(",")),
        });
    }

    let mut out = Vec::new();
    for (i, rec) in rows.enumerate() {
        let row = i + 1;
        let rec = rec?;
        if rec.len() == 1 && rec[0].is_empty() {
            continue;
        }
        if rec.len() != HISTORICAL_HEADER.len() {
            return Err(Error::MalformedRow {
                row,
                column: "*".into(),
                message: format!(
                    "expected {} columns, found {}",
                    HISTORICAL_HEADER.len(),
                    rec.len()
                ),
            });
        }
        let num = |col: usize| -> Result<f64> {
            let column = HISTORICAL_HEADER[col];
            let v: f64 = rec[col].parse().map_err(|_| Error::MalformedRow {
                row,
                column: column.into(),
                message: format!("`{}` is not a number", &rec[col]),
            })?;
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::MalformedRow {
                    row,
                    column: column.into(),
                    message: format!("value {v} must be positive"),
                });
            }
            Ok(v)
        };
        out.push(HistoricalRecord {
            year_label: rec[0].to_string(),
            pub_price: [num(1)?, num(2)?],
            priv_price: [num(3)?, num(4)?],
            total_demand: num(5)?,
        });
    }
    if out.is_empty() {
        return Err(Error::NoDataRows);
    }
    Ok(out)
}

/// Own-price and cross-price slopes in millions of persons per USD.
///
/// `b = 10^(k-6) / ((1+gamma)(1-gamma))`, `c = gamma * b`.
pub fn compute_slopes(gamma: f64, k: i32) -> Result<(f64, f64)> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::Domain("gamma must lie in (0,1)".into()));
    }
    if k < 0 {
        return Err(Error::Domain("k must be non-negative".into()));
    }
    let b = 10f64.powi(k - 6) / ((1.0 + gamma) * (1.0 - gamma));
    Ok((b, gamma * b))
}

fn sector_intercept(
    records: &[HistoricalRecord],
    sector: Sector,
    share: f64,
    gamma: f64,
    unit_cost: [f64; 2],
) -> f64 {
    let price_scale = 1.0 / (2.0 + 2.0 * gamma);
    let total: f64 = records
        .iter()
        .map(|r| {
            let p = r.prices(sector);
            let regimen_price: f64 = (0..2).map(|i| 2.0 * p[i] + unit_cost[i]).sum();
            0.5 * share * r.total_demand + price_scale * regimen_price
        })
        .sum();
    total / records.len() as f64
}

/// Zero-price intercepts `(a_pub, a_priv)` in millions of persons.
///
/// A sector's yearly quantity is its share of the year's total demand.
pub fn estimate_intercepts(
    records: &[HistoricalRecord],
    gamma: f64,
    r_pub: f64,
    unit_cost: [f64; 2],
) -> Result<(f64, f64)> {
    if records.is_empty() {
        return Err(Error::NoDataRows);
    }
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::Domain("gamma must lie in (0,1)".into()));
    }
    if !(r_pub > 0.0 && r_pub < 1.0) {
        return Err(Error::Domain("r_pub must lie in (0,1)".into()));
    }
    if unit_cost.iter().any(|&d| !(d.is_finite() && d >= 0.0)) {
        return Err(Error::Domain(
            "unit costs must be finite and non-negative".into(),
        ));
    }
    let a_pub = sector_intercept(records, Sector::Public, r_pub, gamma, unit_cost);
    let a_priv = sector_intercept(records, Sector::Private, 1.0 - r_pub, gamma, unit_cost);
    Ok((a_pub, a_priv))
}

impl DemandCurve {
    /// Slopes and intercepts for one scenario.
    pub fn estimate(records: &[HistoricalRecord], scenario: &ScenarioConfig) -> Result<Self> {
        let (b, c) = compute_slopes(scenario.gamma, scenario.k)?;
        let (a_pub, a_priv) = estimate_intercepts(
            records,
            scenario.gamma,
            scenario.r_pub,
            scenario.unit_costs(),
        )?;
        DemandCurve::new(a_pub, a_priv, b, c)
    }
}
