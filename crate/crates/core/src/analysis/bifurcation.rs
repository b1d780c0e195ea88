use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::fixed_point::{find_fixed_points, numeric_eigenvalue};
use super::map_fn::MapEngine;
use super::period::{iterate_and_detect_period, BifurcationRecord, PeriodOutcome};
use crate::error::{check, Result};
use crate::massless;
use crate::model::ModelParams;
use crate::output::{Cell, Table};
use crate::sim::SimConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParameter {
    EpsInj,
    Phi,
    KappaC,
    Mu,
}

impl SweepParameter {
    pub fn apply(self, base: &ModelParams, value: f64) -> Result<ModelParams> {
        let mut p = *base;
        match self {
            SweepParameter::EpsInj => p.eps_inj = value,
            SweepParameter::Phi => p.phi = value,
            SweepParameter::KappaC => p.kappa_c = value,
            SweepParameter::Mu => p.mu = value,
        }
        p.validated()
    }

    pub fn name(self) -> &'static str {
        match self {
            SweepParameter::EpsInj => "eps_inj",
            SweepParameter::Phi => "phi",
            SweepParameter::KappaC => "kappa_c",
            SweepParameter::Mu => "mu",
        }
    }
}

impl std::str::FromStr for SweepParameter {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "eps_inj" => Ok(SweepParameter::EpsInj),
            "phi" => Ok(SweepParameter::Phi),
            "kappa_c" => Ok(SweepParameter::KappaC),
            "mu" => Ok(SweepParameter::Mu),
            other => Err(format!("unknown sweep parameter `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ScanSettings {
    pub transient: usize,
    pub samples: usize,
    /// Relative cycle-matching tolerance.
    pub tol: f64,
    /// Initial touchdown energies; `None` picks `0.5 g`, `2 g` and `1e-3`
    /// around the massless fixed point `g` (or `g = 1` without one).
    pub seeds: Option<Vec<f64>>,
    /// Grid cells used to locate period-one fixed points, stable or not.
    pub fixed_point_cells: usize,
    pub parallel: bool,
}

impl Default for ScanSettings {
    fn default() -> Self {
        Self {
            transient: 500,
            samples: 256,
            tol: 1e-5,
            seeds: None,
            fixed_point_cells: 64,
            parallel: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FixedPointBranch {
    pub eps_star: f64,
    pub eigenvalue: Option<f64>,
    pub stable: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BifurcationCell {
    pub swept_value: f64,
    pub attractors: Vec<BifurcationRecord>,
    pub fixed_points: Vec<FixedPointBranch>,
    /// Set when the cell's parameters were invalid.
    pub error: Option<String>,
}

impl BifurcationCell {
    pub fn any_viable(&self) -> bool {
        self.attractors.iter().any(|r| r.period != PeriodOutcome::Failed)
    }

    pub fn periods(&self) -> Vec<PeriodOutcome> {
        self.attractors.iter().map(|r| r.period).collect()
    }
}

fn default_seeds(params: &ModelParams) -> Vec<f64> {
    let g = massless::fixed_point(params).ok().filter(|g| *g > 0.0).unwrap_or(1.0);
    vec![0.5 * g, 2.0 * g, 1e-3]
}

fn scan_cell(
    base: &ModelParams,
    sweep: SweepParameter,
    value: f64,
    engine: MapEngine,
    config: &SimConfig,
    settings: &ScanSettings,
) -> BifurcationCell {
    let params = match sweep.apply(base, value) {
        Ok(p) => p,
        Err(e) => {
            return BifurcationCell {
                swept_value: value,
                attractors: Vec::new(),
                fixed_points: Vec::new(),
                error: Some(e.to_string()),
            }
        }
    };
    let map = engine.build(params, *config);
    let seeds = settings.seeds.clone().unwrap_or_else(|| default_seeds(&params));
    let attractors = seeds
        .iter()
        .map(|&seed| {
            let (period, samples) =
                iterate_and_detect_period(map.as_ref(), seed, settings.transient, settings.samples, settings.tol);
            BifurcationRecord {
                swept_value: value,
                seed,
                attractor_samples: samples,
                stable: matches!(period, PeriodOutcome::Periodic(_)),
                period,
            }
        })
        .collect();

    let guess = massless::fixed_point(&params).unwrap_or(1.0).max(1.0);
    let upper = (3.0 * guess).max(2.0 * params.eps_inj).max(10.0);
    let fixed_points = find_fixed_points(map.as_ref(), 0.0, upper, settings.fixed_point_cells)
        .into_iter()
        .map(|eps_star| {
            let eigenvalue = numeric_eigenvalue(map.as_ref(), eps_star, None).ok();
            FixedPointBranch {
                eps_star,
                eigenvalue,
                stable: eigenvalue.is_some_and(|l| l.abs() < 1.0),
            }
        })
        .collect();

    BifurcationCell {
        swept_value: value,
        attractors,
        fixed_points,
        error: None,
    }
}

/// Sweeps one parameter over `grid`, iterating the map from every seed.
///
/// Cells are independent and may run on the rayon pool; results are returned
/// in grid order either way.
pub fn bifurcation_scan(
    base: &ModelParams,
    sweep: SweepParameter,
    grid: &[f64],
    engine: MapEngine,
    config: &SimConfig,
    settings: &ScanSettings,
) -> Result<Vec<BifurcationCell>> {
    check("grid", !grid.is_empty(), || "must not be empty".to_string())?;
    check("samples", settings.samples >= 1, || "must be at least 1".to_string())?;
    check("tol", settings.tol > 0.0, || "must be > 0".to_string())?;
    let run = |&v: &f64| scan_cell(base, sweep, v, engine, config, settings);
    Ok(if settings.parallel {
        grid.par_iter().map(run).collect()
    } else {
        grid.iter().map(run).collect()
    })
}

/// One row per attractor sample plus one per located fixed point.
pub fn bifurcation_table(sweep: SweepParameter, cells: &[BifurcationCell]) -> Table {
    let mut t = Table::new(
        "bifurcation",
        &[
            "cell",
            "swept_parameter",
            "swept_value",
            "kind",
            "seed",
            "period",
            "eps_td",
            "eigenvalue",
            "stable",
        ],
    );
    for (i, cell) in cells.iter().enumerate() {
        for r in &cell.attractors {
            if r.attractor_samples.is_empty() {
                t.push(vec![
                    i.into(),
                    sweep.name().into(),
                    cell.swept_value.into(),
                    "attractor".into(),
                    r.seed.into(),
                    r.period.label().into(),
                    Cell::Empty,
                    Cell::Empty,
                    r.stable.into(),
                ]);
            }
            for &x in &r.attractor_samples {
                t.push(vec![
                    i.into(),
                    sweep.name().into(),
                    cell.swept_value.into(),
                    "attractor".into(),
                    r.seed.into(),
                    r.period.label().into(),
                    x.into(),
                    Cell::Empty,
                    r.stable.into(),
                ]);
            }
        }
        for fp in &cell.fixed_points {
            t.push(vec![
                i.into(),
                sweep.name().into(),
                cell.swept_value.into(),
                "fixed_point".into(),
                Cell::Empty,
                "1".into(),
                fp.eps_star.into(),
                fp.eigenvalue.into(),
                fp.stable.into(),
            ]);
        }
        if let Some(e) = &cell.error {
            t.push(vec![
                i.into(),
                sweep.name().into(),
                cell.swept_value.into(),
                "error".into(),
                Cell::Empty,
                e.clone().into(),
                Cell::Empty,
                Cell::Empty,
                false.into(),
            ]);
        }
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_scan_is_ordered_and_scheduling_independent() {
        let base = ModelParams::new(10.0, 1.5, 0.1, 0.0).unwrap();
        let grid: Vec<f64> = (0..12).map(|i| 8.0 + i as f64).collect();
        let mut settings = ScanSettings {
            transient: 100,
            samples: 32,
            ..ScanSettings::default()
        };
        let par = bifurcation_scan(
            &base,
            SweepParameter::EpsInj,
            &grid,
            MapEngine::ClosedForm,
            &SimConfig::default(),
            &settings,
        )
        .unwrap();
        settings.parallel = false;
        let ser = bifurcation_scan(
            &base,
            SweepParameter::EpsInj,
            &grid,
            MapEngine::ClosedForm,
            &SimConfig::default(),
            &settings,
        )
        .unwrap();
        assert_eq!(par, ser);
        for (cell, v) in par.iter().zip(&grid) {
            assert_eq!(cell.swept_value, *v);
        }
    }

    #[test]
    fn invalid_cell_is_recorded() {
        let base = ModelParams::new(10.0, 1.5, 0.1, 0.0).unwrap();
        let cells = bifurcation_scan(
            &base,
            SweepParameter::Phi,
            &[-1.0, 1.5],
            MapEngine::ClosedForm,
            &SimConfig::default(),
            &ScanSettings::default(),
        )
        .unwrap();
        assert!(cells[0].error.is_some());
        assert!(cells[1].error.is_none());
        assert!(cells[1].fixed_points.iter().any(|f| f.stable));
    }
}
