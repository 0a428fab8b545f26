//! Private-sector Bertrand-Edgeworth-Chamberlin equilibrium under the surplus
//! regime. Both manufacturers share one price and quantity.

use serde::Serialize;

use crate::market::{DemandCurve, Manufacturer, PrivateEquilibrium, ScenarioConfig};
use crate::{Error, Result};

/// Symmetric equilibrium `p = a_priv / (2b - c)`, `q = b p`, and the residual
/// capacity bound `U` each manufacturer must keep free for the private market.
pub fn private_equilibrium(curve: &DemandCurve, gamma: f64) -> Result<PrivateEquilibrium> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::Domain("gamma must lie in (0,1)".into()));
    }
    curve.validate()?;
    let denom = 2.0 * curve.b - curve.c;
    if denom <= 0.0 {
        return Err(Error::Domain("2b - c must be positive".into()));
    }
    let p_priv = curve.a_priv / denom;
    let q_priv = curve.b * p_priv;
    Ok(PrivateEquilibrium {
        p_priv,
        q_priv,
        surplus_bound: surplus_bound(curve.a_priv, gamma),
    })
}

pub(crate) fn surplus_bound(a_priv: f64, gamma: f64) -> f64 {
    let bracket = 1.0 - 2.0 * (1.0 - gamma).sqrt() / ((1.0 + gamma).sqrt() * (2.0 - gamma));
    a_priv * (1.0 + gamma) / gamma * bracket
}

/// Room left for public-sector sales once `U` is reserved.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SurplusHeadroom {
    /// Largest public quantity the surplus condition allows, `K_i - U`.
    pub max_public_quantity: [f64; 2],
    pub admissible: [bool; 2],
}

impl SurplusHeadroom {
    pub fn all_admissible(&self) -> bool {
        self.admissible.iter().all(|&a| a)
    }
}

pub fn check_surplus_regime(
    equilibrium: &PrivateEquilibrium,
    capacities: [f64; 2],
) -> SurplusHeadroom {
    let headroom = capacities.map(|k| k - equilibrium.surplus_bound);
    SurplusHeadroom {
        max_public_quantity: headroom,
        admissible: headroom.map(|h| h >= 0.0),
    }
}

impl PrivateEquilibrium {
    pub fn for_scenario(curve: &DemandCurve, scenario: &ScenarioConfig) -> Result<Self> {
        private_equilibrium(curve, scenario.gamma)
    }

    /// Private-sector profit of `m` at this equilibrium, millions of USD.
    /// Negative when the unit cost exceeds the equilibrium price.
    pub fn private_profit(&self, scenario: &ScenarioConfig, m: Manufacturer) -> f64 {
        self.q_priv * (self.p_priv - scenario.params(m).unit_cost)
    }
}
