use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use softhop::analysis::{
    bifurcation_scan, bifurcation_table, classify_basin, constant_eigenvalue_curve, constant_fixed_point_surface,
    find_fixed_points, numeric_eigenvalue, surface_table, EnergyMap, MapEngine, ScanSettings, SimulatedMap,
};
use softhop::massless;
use softhop::model::{nondimensionalize, HopperState, ModelParams};
use softhop::output::{Cell, Table};
use softhop::simulate_trajectory;

use crate::config::{RunConfig, Spacing, Start};
use crate::error::CliError;

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
    }
}

fn logspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    linspace(lo.ln(), hi.ln(), n).into_iter().map(f64::exp).collect()
}

fn config_error(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

fn require(ok: bool, msg: impl FnOnce() -> String) -> Result<(), CliError> {
    if ok {
        Ok(())
    } else {
        Err(config_error(msg()))
    }
}

/// Closed-form maps describe a massless foot; simulation needs a foot mass.
fn check_engine(engine: MapEngine, params: &ModelParams) -> Result<(), CliError> {
    match engine {
        MapEngine::ClosedForm => require(params.mu == 0.0, || {
            format!("engine closed_form requires model.mu = 0, got {}", params.mu)
        }),
        MapEngine::Simulate => require(params.mu > 0.0, || "engine simulate requires model.mu > 0".to_string()),
    }
}

/// Path of a companion file: `run.csv` with suffix `hops` becomes `run.hops.csv`.
pub fn companion_path(out: &Path, suffix: &str, ext: &str) -> PathBuf {
    let stem = out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    out.with_file_name(format!("{stem}.{suffix}.{ext}"))
}

struct Writer<'a> {
    config: &'a RunConfig,
    echo: serde_json::Value,
}

impl<'a> Writer<'a> {
    fn new(config: &'a RunConfig) -> Self {
        Self {
            config,
            echo: config.echo(),
        }
    }

    fn write_to(&self, table: &Table, path: Option<&Path>) -> Result<(), CliError> {
        let format = self.config.run.format;
        match path {
            Some(p) => {
                let mut w = BufWriter::new(File::create(p)?);
                table.write(&mut w, format, &self.echo)?;
                w.flush()?;
            }
            None => {
                let stdout = io::stdout();
                let mut w = stdout.lock();
                table.write(&mut w, format, &self.echo)?;
                w.flush()?;
            }
        }
        Ok(())
    }

    fn main(&self, table: &Table) -> Result<(), CliError> {
        self.write_to(table, self.config.run.out.as_deref())
    }

    /// Secondary table next to the main output; skipped when writing to stdout.
    fn companion(&self, table: &Table, suffix: &str) -> Result<(), CliError> {
        match &self.config.run.out {
            Some(out) => {
                let path = companion_path(out, suffix, self.config.run.format.extension());
                self.write_to(table, Some(&path))
            }
            None => {
                eprintln!("note: {suffix} table not written (needs --out)");
                Ok(())
            }
        }
    }
}

pub fn simulate(config: &RunConfig) -> Result<(), CliError> {
    let params = config.model.params()?;
    require(params.mu > 0.0, || "simulate requires model.mu > 0".to_string())?;
    let s = &config.simulate;
    let initial = match (s.state, s.start) {
        (Some([xi_b, xi_f, v_b, v_f]), _) => HopperState::new(xi_b, xi_f, v_b, v_f),
        (None, Start::Rest) => HopperState::at_rest(params.lambda_c),
        (None, Start::Touchdown) => {
            require(s.eps_td.is_finite() && s.eps_td >= 0.0, || {
                format!("simulate.eps_td must be finite and >= 0, got {}", s.eps_td)
            })?;
            HopperState::new(params.lambda_c + s.eps_td, s.eps_td, 0.0, 0.0)
        }
    };
    let traj = simulate_trajectory(initial, &params, &config.sim, s.hops)?;
    let writer = Writer::new(config);
    match &config.run.out {
        Some(_) => {
            writer.main(&traj.samples_table())?;
            writer.companion(&traj.hops_table(), "hops")
        }
        None => writer.main(&traj.hops_table()),
    }
}

pub fn map(config: &RunConfig) -> Result<(), CliError> {
    let params = config.model.params()?;
    let m = &config.map;
    check_engine(m.engine, &params)?;
    require(m.points >= 1, || "map.points must be at least 1".to_string())?;
    require(m.eps_min >= 0.0 && m.eps_max >= m.eps_min, || {
        format!(
            "map range [{}, {}] must satisfy 0 <= eps_min <= eps_max",
            m.eps_min, m.eps_max
        )
    })?;
    let grid = linspace(m.eps_min, m.eps_max, m.points);
    let rows: Vec<(Option<f64>, Option<String>)> = match m.engine {
        MapEngine::ClosedForm => grid
            .iter()
            .map(|&e| {
                let v = massless::map_eval(e, &params);
                ((v >= 0.0).then_some(v), None)
            })
            .collect(),
        MapEngine::Simulate => {
            let sim = SimulatedMap::new(params, config.sim);
            grid.par_iter()
                .map(|&e| match sim.try_apply(e) {
                    Ok(v) => (v, None),
                    Err(err) => (None, Some(err.to_string())),
                })
                .collect()
        }
    };
    if rows.iter().all(|(_, e)| e.is_some()) {
        return Err(CliError::Numerical(softhop::Error::MapFailure { at: grid[0] }));
    }
    let mut t = Table::new("map", &["eps_td", "eps_next", "failed", "error"]);
    for (e, (v, err)) in grid.iter().zip(rows) {
        t.push(vec![
            (*e).into(),
            v.into(),
            (v.is_none() && err.is_none()).into(),
            err.map_or(Cell::Empty, Cell::from),
        ]);
    }
    Writer::new(config).main(&t)
}

pub fn fixed_point(config: &RunConfig) -> Result<(), CliError> {
    let params = config.model.params()?;
    let f = &config.fixed_point;
    check_engine(f.engine, &params)?;
    let mut t = Table::new(
        "fixed_point",
        &[
            "engine",
            "index",
            "eps_star",
            "eigenvalue",
            "efficiency",
            "stability_margin",
            "globally_stable",
            "eps_inj_min",
            "gait",
        ],
    );
    let eps_inj_min = massless::min_injected_energy(params.phi, params.kappa_c);
    let no_gait = |t: &mut Table, engine: &str| {
        t.push(vec![
            engine.into(),
            Cell::Empty,
            Cell::Empty,
            Cell::Empty,
            Cell::Empty,
            Cell::Empty,
            Cell::Empty,
            eps_inj_min.into(),
            false.into(),
        ]);
    };
    match f.engine {
        MapEngine::ClosedForm => match massless::gait_metrics(&params) {
            Ok(g) => t.push(vec![
                "closed_form".into(),
                0usize.into(),
                g.fixed_point.into(),
                g.eigenvalue.into(),
                g.efficiency.into(),
                g.stability_margin.into(),
                g.globally_stable.into(),
                eps_inj_min.into(),
                true.into(),
            ]),
            Err(softhop::Error::NoGait { .. }) => no_gait(&mut t, "closed_form"),
            Err(e) => return Err(e.into()),
        },
        MapEngine::Simulate => {
            let guess = massless::fixed_point(&ModelParams { mu: 0.0, ..params })
                .unwrap_or(1.0)
                .max(1.0);
            let upper = f
                .search_max
                .unwrap_or((3.0 * guess).max(2.0 * params.eps_inj).max(10.0));
            require(upper > 0.0 && f.cells >= 1, || {
                "fixed_point.search_max and cells must be positive".to_string()
            })?;
            let map = SimulatedMap::new(params, config.sim);
            let fps = find_fixed_points(&map, 0.0, upper, f.cells);
            if fps.is_empty() {
                no_gait(&mut t, "simulate");
            }
            for (i, fp) in fps.into_iter().enumerate() {
                let lambda = numeric_eigenvalue(&map, fp, None).ok();
                t.push(vec![
                    "simulate".into(),
                    i.into(),
                    fp.into(),
                    lambda.into(),
                    (fp / (fp + params.eps_inj)).into(),
                    lambda.map(massless::stability_margin).into(),
                    Cell::Empty,
                    eps_inj_min.into(),
                    true.into(),
                ]);
            }
        }
    }
    Writer::new(config).main(&t)
}

pub fn bifurcate(config: &RunConfig) -> Result<(), CliError> {
    let base = config.model.params()?;
    let b = &config.bifurcate;
    check_engine(b.engine, &base)?;
    require(b.points >= 1, || "bifurcate.points must be at least 1".to_string())?;
    let settings = ScanSettings {
        transient: b.transient,
        samples: b.samples,
        tol: b.tol,
        seeds: b.seeds.clone(),
        fixed_point_cells: b.fixed_point_cells,
        parallel: true,
    };
    let grid = linspace(b.start, b.stop, b.points);
    let cells = bifurcation_scan(&base, b.parameter, &grid, b.engine, &config.sim, &settings)?;
    if cells.iter().all(|c| c.error.is_some()) {
        return Err(config_error(format!(
            "every {} value in [{}, {}] is invalid: {}",
            b.parameter.name(),
            b.start,
            b.stop,
            cells[0].error.as_deref().unwrap_or_default()
        )));
    }
    Writer::new(config).main(&bifurcation_table(b.parameter, &cells))
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Outcome {
    Converged(usize),
    Failed(usize),
    Undecided,
}

fn iterate_to(map: &dyn EnergyMap, mut x: f64, target: f64, iterations: usize) -> Outcome {
    for k in 1..=iterations {
        match map.apply(x) {
            Some(v) => x = v,
            None => return Outcome::Failed(k),
        }
        if (x - target).abs() <= 1e-6 * target.max(1.0) {
            return Outcome::Converged(k);
        }
    }
    Outcome::Undecided
}

pub fn basin(config: &RunConfig) -> Result<(), CliError> {
    let params = config.model.params()?;
    let b = &config.basin;
    check_engine(b.engine, &params)?;
    require(b.resolution > 0.0, || "basin.resolution must be > 0".to_string())?;
    let report = match classify_basin(&params, b.engine, &config.sim, b.depth, b.resolution) {
        Err(softhop::Error::NoGait { eps_inj, minimum }) => {
            return Err(CliError::Numerical(softhop::Error::NoGait { eps_inj, minimum }))
        }
        other => other?,
    };
    let writer = Writer::new(config);
    writer.main(&report.table())?;
    if b.monte_carlo == 0 {
        return Ok(());
    }
    let upper = b.sample_max.unwrap_or(10.0 * report.fixed_point.max(1.0));
    require(upper > 0.0, || "basin.sample_max must be > 0".to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.run.seed);
    let starts: Vec<f64> = (0..b.monte_carlo).map(|_| rng.gen_range(0.0..upper)).collect();
    let map = b.engine.build(params, config.sim);
    let outcomes: Vec<Outcome> = starts
        .par_iter()
        .map(|&x| iterate_to(map.as_ref(), x, report.fixed_point, b.iterations))
        .collect();
    let mut t = Table::new("basin_monte_carlo", &["sample", "eps_td", "outcome", "hops"]);
    for (i, (x, o)) in starts.iter().zip(outcomes).enumerate() {
        let (label, hops) = match o {
            Outcome::Converged(k) => ("converged", Cell::from(k)),
            Outcome::Failed(k) => ("failed", Cell::from(k)),
            Outcome::Undecided => ("undecided", Cell::Empty),
        };
        t.push(vec![i.into(), (*x).into(), label.into(), hops]);
    }
    writer.companion(&t, "mc")
}

pub fn surface(config: &RunConfig) -> Result<(), CliError> {
    let s = &config.surface;
    require(s.target > 0.0, || "surface.target must be > 0".to_string())?;
    require(s.phi_min > 0.0 && s.phi_max >= s.phi_min, || {
        format!(
            "surface phi range [{}, {}] must be positive and ordered",
            s.phi_min, s.phi_max
        )
    })?;
    require(s.kappa_min > 0.0 && s.kappa_max >= s.kappa_min, || {
        format!(
            "surface kappa range [{}, {}] must be positive and ordered",
            s.kappa_min, s.kappa_max
        )
    })?;
    let phis = linspace(s.phi_min, s.phi_max, s.phi_points);
    let kappas = match s.kappa_spacing {
        Spacing::Linear => linspace(s.kappa_min, s.kappa_max, s.kappa_points),
        Spacing::Log => logspace(s.kappa_min, s.kappa_max, s.kappa_points),
    };
    let cells = constant_fixed_point_surface(s.target, &phis, &kappas);
    let writer = Writer::new(config);
    writer.main(&surface_table(&cells))?;
    if s.eigenvalues.is_empty() {
        return Ok(());
    }
    let mut t = Table::new(
        "eigenvalue_curve",
        &[
            "target_eigenvalue",
            "kappa_c",
            "eps_inj",
            "phi",
            "fixed_point",
            "eigenvalue",
            "exists",
        ],
    );
    for &lambda in &s.eigenvalues {
        for (k, point) in kappas.iter().zip(constant_eigenvalue_curve(s.target, lambda, &kappas)) {
            let row = match point {
                Some(p) => vec![
                    lambda.into(),
                    p.kappa_c.into(),
                    p.eps_inj.into(),
                    p.phi.into(),
                    p.fixed_point.into(),
                    p.eigenvalue.into(),
                    true.into(),
                ],
                None => vec![
                    lambda.into(),
                    (*k).into(),
                    Cell::Empty,
                    Cell::Empty,
                    Cell::Empty,
                    Cell::Empty,
                    false.into(),
                ],
            };
            t.push(row);
        }
    }
    writer.companion(&t, "curve")
}

pub fn nondim(config: &RunConfig) -> Result<(), CliError> {
    let (design, scales) = nondimensionalize(&config.nondim.spec())?;
    let mut t = Table::new(
        "nondim",
        &[
            "kappa_c",
            "mu",
            "lambda_c",
            "mass_scale",
            "length_scale",
            "time_scale",
            "energy_scale",
        ],
    );
    t.push(vec![
        design.kappa_c.into(),
        design.mu.into(),
        design.lambda_c.into(),
        scales.mass.into(),
        scales.length.into(),
        scales.time.into(),
        scales.energy.into(),
    ]);
    Writer::new(config).main(&t)
}
