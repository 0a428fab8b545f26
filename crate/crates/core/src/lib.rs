//! Duopoly vaccine price negotiation.
//!
//! The pipeline runs in four stages:
//!
//! 1. [`demand`] turns historical per-sector price/demand records into linear
//!    demand-curve intercepts and slopes.
//! 2. [`equilibrium`] fixes the private-sector price and quantity at the
//!    symmetric Bertrand-Edgeworth-Chamberlin surplus equilibrium.
//! 3. [`negotiation`] solves the public-sector price negotiation, a nonconvex
//!    program over the two public prices, to certified global optimality.
//! 4. [`sweep`] runs the whole pipeline over a scenario grid and aggregates
//!    the outcomes.
//!
//! Units are fixed throughout: quantities in millions of two-dose regimens,
//! prices and unit costs in USD per regimen, profits in millions of USD.

pub mod demand;
pub mod equilibrium;
mod error;
pub mod market;
pub mod negotiation;
pub mod par;
pub mod sweep;

pub use demand::{
    bundled_historical, compute_slopes, estimate_intercepts, load_historical, parse_historical,
    HistoricalRecord,
};
pub use equilibrium::{check_surplus_regime, private_equilibrium, SurplusHeadroom};
pub use error::{Error, Result};
pub use market::{
    default_sweep_grid, DemandCurve, Manufacturer, ManufacturerParams, NegotiationSolution,
    PrivateEquilibrium, ScenarioConfig, SolveStatus, SweepSummary,
};
pub use negotiation::{
    evaluate_point, oracle_solve, solve, OptimalityCertificate, OracleOutcome, PointEvaluation,
    ReducedProblem, Tolerances,
};
pub use sweep::{filter_by_band, run_sweep, summarize, PriceBand, RowStatus, SweepResultRow};
