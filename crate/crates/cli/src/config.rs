//! Run configuration: a TOML file with one section per subcommand, overlaid
//! with `--set section.key=value` overrides and the common flags.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use softhop::analysis::{MapEngine, SweepParameter};
use softhop::model::{DimensionalSpec, ModelParams};
use softhop::output::Format;
use softhop::SimConfig;
use toml::{Table, Value};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelSection {
    pub eps_inj: f64,
    pub phi: f64,
    pub kappa_c: f64,
    pub mu: f64,
    pub lambda_c: f64,
    pub phi_fric: f64,
}

impl Default for ModelSection {
    fn default() -> Self {
        Self {
            eps_inj: 10.0,
            phi: 1.25,
            kappa_c: 0.1,
            mu: 0.0,
            lambda_c: ModelParams::DEFAULT_LAMBDA_C,
            phi_fric: 0.0,
        }
    }
}

impl ModelSection {
    pub fn params(&self) -> Result<ModelParams, CliError> {
        let p = ModelParams {
            eps_inj: self.eps_inj,
            phi: self.phi,
            kappa_c: self.kappa_c,
            mu: self.mu,
            lambda_c: self.lambda_c,
            phi_fric: self.phi_fric,
        };
        Ok(p.validated()?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunSection {
    pub out: Option<PathBuf>,
    pub format: Format,
    /// Worker threads for sweeps; 0 uses one per core.
    pub workers: usize,
    pub seed: u64,
}

impl Default for RunSection {
    fn default() -> Self {
        Self {
            out: None,
            format: Format::Csv,
            workers: 0,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Start {
    /// Leg at its unloaded length, foot on the surface, everything at rest.
    #[default]
    Rest,
    /// Released from the flight apex that touches down with COM kinetic energy `eps_td`.
    Touchdown,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimulateSection {
    pub hops: usize,
    pub start: Start,
    pub eps_td: f64,
    /// Explicit `[xi_b, xi_f, v_b, v_f]`; overrides `start` when present.
    pub state: Option<[f64; 4]>,
}

impl Default for SimulateSection {
    fn default() -> Self {
        Self {
            hops: 20,
            start: Start::Rest,
            eps_td: 0.0,
            state: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MapSection {
    pub engine: MapEngine,
    pub eps_min: f64,
    pub eps_max: f64,
    pub points: usize,
}

impl Default for MapSection {
    fn default() -> Self {
        Self {
            engine: MapEngine::ClosedForm,
            eps_min: 0.0,
            eps_max: 100.0,
            points: 101,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FixedPointSection {
    pub engine: MapEngine,
    /// Upper end of the numeric search; defaults to a bound derived from the parameters.
    pub search_max: Option<f64>,
    pub cells: usize,
}

impl Default for FixedPointSection {
    fn default() -> Self {
        Self {
            engine: MapEngine::ClosedForm,
            search_max: None,
            cells: 64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BifurcateSection {
    pub engine: MapEngine,
    pub parameter: SweepParameter,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    pub transient: usize,
    pub samples: usize,
    pub tol: f64,
    pub seeds: Option<Vec<f64>>,
    pub fixed_point_cells: usize,
}

impl Default for BifurcateSection {
    fn default() -> Self {
        Self {
            engine: MapEngine::ClosedForm,
            parameter: SweepParameter::EpsInj,
            start: 11.6,
            stop: 15.0,
            points: 100,
            transient: 500,
            samples: 256,
            tol: 1e-5,
            seeds: None,
            fixed_point_cells: 64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BasinSection {
    pub engine: MapEngine,
    pub depth: usize,
    pub resolution: f64,
    /// Random initial energies iterated as a convergence check; 0 disables it.
    pub monte_carlo: usize,
    pub iterations: usize,
    /// Upper end of the Monte Carlo draw; defaults to ten times the fixed point.
    pub sample_max: Option<f64>,
}

impl Default for BasinSection {
    fn default() -> Self {
        Self {
            engine: MapEngine::ClosedForm,
            depth: 12,
            resolution: 1e-6,
            monte_carlo: 0,
            iterations: 10_000,
            sample_max: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    Linear,
    #[default]
    Log,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SurfaceSection {
    pub target: f64,
    pub phi_min: f64,
    pub phi_max: f64,
    pub phi_points: usize,
    pub kappa_min: f64,
    pub kappa_max: f64,
    pub kappa_points: usize,
    pub kappa_spacing: Spacing,
    /// Eigenvalues whose constant-eigenvalue curves are traced over the kappa grid.
    pub eigenvalues: Vec<f64>,
}

impl Default for SurfaceSection {
    fn default() -> Self {
        Self {
            target: 10.0,
            phi_min: 1.0,
            phi_max: 3.0,
            phi_points: 100,
            kappa_min: 0.05,
            kappa_max: 10.0,
            kappa_points: 100,
            kappa_spacing: Spacing::Log,
            eigenvalues: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NondimSection {
    pub body_mass: f64,
    pub foot_mass: f64,
    pub ground_stiffness: f64,
    pub leg_stiffness_c: f64,
    pub unloaded_leg_length: f64,
    pub gravity: f64,
}

impl Default for NondimSection {
    fn default() -> Self {
        Self {
            body_mass: 2.5,
            foot_mass: 0.5,
            ground_stiffness: 4800.0,
            leg_stiffness_c: 1296.0,
            unloaded_leg_length: 0.2,
            gravity: 9.81,
        }
    }
}

impl NondimSection {
    pub fn spec(&self) -> DimensionalSpec {
        DimensionalSpec {
            body_mass: self.body_mass,
            foot_mass: self.foot_mass,
            ground_stiffness: self.ground_stiffness,
            leg_stiffness_c: self.leg_stiffness_c,
            unloaded_leg_length: self.unloaded_leg_length,
            gravity: self.gravity,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub run: RunSection,
    pub model: ModelSection,
    pub sim: SimConfig,
    pub simulate: SimulateSection,
    pub map: MapSection,
    pub fixed_point: FixedPointSection,
    pub bifurcate: BifurcateSection,
    pub basin: BasinSection,
    pub surface: SurfaceSection,
    pub nondim: NondimSection,
}

/// Common flags that override the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub sets: Vec<String>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub workers: Option<usize>,
    pub seed: Option<u64>,
}

fn parse_value(raw: &str) -> Value {
    let doc = format!("v = {raw}");
    match doc.parse::<Table>() {
        Ok(mut t) => t.remove("v").unwrap_or_else(|| Value::String(raw.to_string())),
        Err(_) => Value::String(raw.to_string()),
    }
}

fn set_path(root: &mut Table, path: &str, value: Value) -> Result<(), CliError> {
    let keys: Vec<&str> = path.split('.').collect();
    if keys.iter().any(|k| k.is_empty()) {
        return Err(CliError::Config(format!("malformed key `{path}`")));
    }
    let (last, parents) = keys.split_last().unwrap();
    let mut table = root;
    for key in parents {
        let entry = table
            .entry(key.to_string())
            .or_insert_with(|| Value::Table(Table::new()));
        table = entry
            .as_table_mut()
            .ok_or_else(|| CliError::Config(format!("`{key}` in `{path}` is not a section")))?;
    }
    table.insert(last.to_string(), value);
    Ok(())
}

impl RunConfig {
    pub fn load(path: Option<&Path>, overrides: &Overrides) -> Result<Self, CliError> {
        let mut root = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| CliError::Config(format!("cannot read {}: {e}", p.display())))?;
                text.parse::<Table>()
                    .map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?
            }
            None => Table::new(),
        };
        for set in &overrides.sets {
            let (key, raw) = set
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("`--set {set}` is not KEY=VALUE")))?;
            set_path(&mut root, key.trim(), parse_value(raw.trim()))?;
        }
        if let Some(out) = &overrides.out {
            set_path(&mut root, "run.out", Value::String(out.display().to_string()))?;
        }
        if let Some(f) = overrides.format {
            set_path(&mut root, "run.format", Value::String(f.extension().to_string()))?;
        }
        if let Some(w) = overrides.workers {
            set_path(&mut root, "run.workers", Value::Integer(w as i64))?;
        }
        if let Some(s) = overrides.seed {
            let s = i64::try_from(s).map_err(|_| CliError::Config(format!("seed {s} is too large")))?;
            set_path(&mut root, "run.seed", Value::Integer(s))?;
        }
        let config: RunConfig = Value::Table(root)
            .try_into()
            .map_err(|e: toml::de::Error| CliError::Config(e.to_string()))?;
        config.sim.validated()?;
        Ok(config)
    }

    /// Configuration echo embedded in output headers.
    pub fn echo(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("run config serializes")
    }
}
