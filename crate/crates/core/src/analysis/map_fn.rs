use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::massless;
use crate::model::ModelParams;
use crate::sim::{simulate_hop, SimConfig};

/// A deterministic touchdown-energy return map.
///
/// `apply` returns `None` for a failed hop (negative closed-form value or a
/// simulated hop that never reaches the next touchdown).
pub trait EnergyMap: Sync {
    fn apply(&self, eps_td: f64) -> Option<f64>;

    /// Signed map value where one exists, used for minimum searches.
    fn signed(&self, eps_td: f64) -> Option<f64> {
        self.apply(eps_td)
    }

    /// True when the map is known to decrease then increase on `[0, inf)`.
    fn unimodal(&self) -> bool {
        false
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormMap {
    pub params: ModelParams,
}

impl ClosedFormMap {
    pub fn new(params: ModelParams) -> Self {
        Self { params }
    }
}

impl EnergyMap for ClosedFormMap {
    fn apply(&self, eps_td: f64) -> Option<f64> {
        self.signed(eps_td).filter(|v| *v >= 0.0)
    }

    fn signed(&self, eps_td: f64) -> Option<f64> {
        let v = massless::map_eval(eps_td, &self.params);
        v.is_finite().then_some(v)
    }

    fn unimodal(&self) -> bool {
        true
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulatedMap {
    pub params: ModelParams,
    pub config: SimConfig,
}

impl SimulatedMap {
    pub fn new(params: ModelParams, config: SimConfig) -> Self {
        Self { params, config }
    }

    /// Like [`EnergyMap::apply`] but surfaces simulator errors.
    pub fn try_apply(&self, eps_td: f64) -> Result<Option<f64>> {
        Ok(simulate_hop(eps_td, &self.params, &self.config)?.eps_td_out)
    }
}

impl EnergyMap for SimulatedMap {
    fn apply(&self, eps_td: f64) -> Option<f64> {
        if !(eps_td >= 0.0) {
            return None;
        }
        self.try_apply(eps_td).ok().flatten()
    }
}

/// Wraps a closure as a map; values below zero count as failures.
pub struct FnMap<F>(pub F);

impl<F: Fn(f64) -> f64 + Sync> EnergyMap for FnMap<F> {
    fn apply(&self, eps_td: f64) -> Option<f64> {
        self.signed(eps_td).filter(|v| *v >= 0.0)
    }

    fn signed(&self, eps_td: f64) -> Option<f64> {
        let v = (self.0)(eps_td);
        v.is_finite().then_some(v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MapEngine {
    #[default]
    ClosedForm,
    Simulate,
}

impl MapEngine {
    pub fn build(self, params: ModelParams, config: SimConfig) -> Box<dyn EnergyMap> {
        match self {
            MapEngine::ClosedForm => Box::new(ClosedFormMap::new(params)),
            MapEngine::Simulate => Box::new(SimulatedMap::new(params, config)),
        }
    }
}

impl std::str::FromStr for MapEngine {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "closed_form" => Ok(MapEngine::ClosedForm),
            "simulate" => Ok(MapEngine::Simulate),
            other => Err(format!("unknown engine `{other}` (expected closed_form or simulate)")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_failure_signal() {
        let m = ClosedFormMap::new(ModelParams::new(10.0, 2.0, 0.1, 0.0).unwrap());
        assert!(m.apply(0.0).is_none());
        assert!(m.signed(0.0).unwrap() < 0.0);
        assert!(m.apply(60.0).is_some());
    }

    #[test]
    fn simulated_map_rejects_negative_input() {
        let m = SimulatedMap::new(ModelParams::new(10.0, 1.0, 0.1, 0.01).unwrap(), SimConfig::default());
        assert!(m.apply(-1.0).is_none());
    }
}
