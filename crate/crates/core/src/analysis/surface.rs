use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::massless::{self, GaitAnalysis};
use crate::model::ModelParams;
use crate::output::{Cell, Table};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurfacePoint {
    pub eps_inj: f64,
    pub metrics: GaitAnalysis,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurfaceCell {
    pub phi: f64,
    pub kappa_c: f64,
    /// `None` where no injected energy produces the target fixed point.
    pub point: Option<SurfacePoint>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub kappa_c: f64,
    pub eps_inj: f64,
    pub phi: f64,
    pub fixed_point: f64,
    pub eigenvalue: f64,
}

fn massless_params(eps_inj: f64, phi: f64, kappa_c: f64) -> Option<ModelParams> {
    ModelParams::new(eps_inj, phi, kappa_c, 0.0).ok()
}

fn fixed_point_at(eps_inj: f64, phi: f64, kappa_c: f64) -> Option<f64> {
    massless::fixed_point(&massless_params(eps_inj, phi, kappa_c)?).ok()
}

/// Injected energy whose massless fixed point equals `target`.
pub fn solve_eps_inj_for_fixed_point(target: f64, phi: f64, kappa_c: f64) -> Option<f64> {
    if !(target > 0.0 && phi > 0.0 && kappa_c > 0.0) {
        return None;
    }
    let keq = kappa_c / (1.0 + kappa_c);
    let phi_le_one = 0.5 * (1.0 + (1.0 + 2.0 * keq * target).sqrt()).powi(2);
    if phi <= 1.0 {
        return Some(phi_le_one);
    }
    let mut lo = massless::min_injected_energy(phi, kappa_c);
    if !lo.is_finite() {
        return None;
    }
    let mut hi = phi_le_one.max(lo) * 2.0;
    loop {
        match fixed_point_at(hi, phi, kappa_c) {
            Some(v) if v >= target => break,
            _ if hi > 1e9 => return None,
            _ => {
                lo = hi;
                hi *= 2.0;
            }
        }
    }
    for _ in 0..200 {
        if hi - lo <= 1e-13 * hi {
            break;
        }
        let mid = 0.5 * (lo + hi);
        match fixed_point_at(mid, phi, kappa_c) {
            Some(v) if v >= target => hi = mid,
            _ => lo = mid,
        }
    }
    Some(0.5 * (lo + hi))
}

fn surface_point(target: f64, phi: f64, kappa_c: f64) -> Option<SurfacePoint> {
    let eps_inj = solve_eps_inj_for_fixed_point(target, phi, kappa_c)?;
    let metrics = massless::gait_metrics(&massless_params(eps_inj, phi, kappa_c)?).ok()?;
    Some(SurfacePoint { eps_inj, metrics })
}

/// Constant-fixed-point surface over the `(phi, kappa_c)` grid, row-major in `phi`.
pub fn constant_fixed_point_surface(target: f64, phis: &[f64], kappas: &[f64]) -> Vec<SurfaceCell> {
    let cells: Vec<(f64, f64)> = phis
        .iter()
        .flat_map(|&phi| kappas.iter().map(move |&k| (phi, k)))
        .collect();
    cells
        .par_iter()
        .map(|&(phi, kappa_c)| SurfaceCell {
            phi,
            kappa_c,
            point: surface_point(target, phi, kappa_c),
        })
        .collect()
}

pub fn surface_table(cells: &[SurfaceCell]) -> Table {
    let mut t = Table::new(
        "surface",
        &[
            "phi",
            "kappa_c",
            "eps_inj",
            "eigenvalue",
            "efficiency",
            "stability_margin",
            "globally_stable",
            "exists",
        ],
    );
    for c in cells {
        let row = match c.point {
            Some(p) => vec![
                c.phi.into(),
                c.kappa_c.into(),
                p.eps_inj.into(),
                p.metrics.eigenvalue.into(),
                p.metrics.efficiency.into(),
                p.metrics.stability_margin.into(),
                p.metrics.globally_stable.into(),
                true.into(),
            ],
            None => vec![
                c.phi.into(),
                c.kappa_c.into(),
                Cell::Empty,
                Cell::Empty,
                Cell::Empty,
                Cell::Empty,
                Cell::Empty,
                false.into(),
            ],
        };
        t.push(row);
    }
    t
}

fn eigen_on_surface(target: f64, phi: f64, kappa_c: f64) -> Option<(f64, f64)> {
    let p = surface_point(target, phi, kappa_c)?;
    Some((p.eps_inj, p.metrics.eigenvalue))
}

/// Smallest `phi >= 1` on the constant-fixed-point surface with eigenvalue `target_lambda`.
pub fn constant_eigenvalue_point(target_eps: f64, target_lambda: f64, kappa_c: f64) -> Option<CurvePoint> {
    const PHI_MAX: f64 = 20.0;
    const CELLS: usize = 400;
    let g = |phi: f64| eigen_on_surface(target_eps, phi, kappa_c).map(|(_, l)| l - target_lambda);
    let mut prev_phi = 1.0;
    let mut prev = g(1.0);
    let mut bracket = None;
    if prev == Some(0.0) {
        bracket = Some((1.0, 1.0));
    }
    for i in 1..=CELLS {
        if bracket.is_some() {
            break;
        }
        let phi = 1.0 + (PHI_MAX - 1.0) * i as f64 / CELLS as f64;
        let cur = g(phi);
        if let (Some(a), Some(b)) = (prev, cur) {
            if (a > 0.0) != (b > 0.0) || b == 0.0 {
                bracket = Some((prev_phi, phi));
            }
        }
        prev = cur;
        prev_phi = phi;
    }
    let (mut lo, mut hi) = bracket?;
    let sign_lo = g(lo)? > 0.0;
    while hi - lo > 1e-14 * hi {
        let mid = 0.5 * (lo + hi);
        match g(mid) {
            Some(v) if (v > 0.0) == sign_lo && v != 0.0 => lo = mid,
            Some(_) => hi = mid,
            None => return None,
        }
    }
    let phi = if bracket == Some((1.0, 1.0)) {
        1.0
    } else {
        0.5 * (lo + hi)
    };
    let (eps_inj, eigenvalue) = eigen_on_surface(target_eps, phi, kappa_c)?;
    let fixed_point = fixed_point_at(eps_inj, phi, kappa_c)?;
    Some(CurvePoint {
        kappa_c,
        eps_inj,
        phi,
        fixed_point,
        eigenvalue,
    })
}

/// Constant-eigenvalue curve on the constant-fixed-point surface, one entry per `kappa_c`.
pub fn constant_eigenvalue_curve(target_eps: f64, target_lambda: f64, kappas: &[f64]) -> Vec<Option<CurvePoint>> {
    kappas
        .par_iter()
        .map(|&k| constant_eigenvalue_point(target_eps, target_lambda, k))
        .collect()
}
