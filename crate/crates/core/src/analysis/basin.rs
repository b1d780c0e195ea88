use serde::{Deserialize, Serialize};

use super::fixed_point::{find_fixed_points, numeric_eigenvalue};
use super::map_fn::{ClosedFormMap, EnergyMap, MapEngine, SimulatedMap};
use crate::error::{Error, Result};
use crate::massless::{self, golden_section};
use crate::model::ModelParams;
use crate::output::{Cell, Table};
use crate::sim::SimConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BasinClass {
    Global,
    Banded,
    Unstable,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

/// Touchdown energies that reach the failure set after exactly `depth` hops.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Band {
    pub depth: usize,
    pub interval: Interval,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasinReport {
    pub classification: BasinClass,
    pub fixed_point: f64,
    pub eigenvalue: f64,
    /// Location and value of the map minimum, when searched.
    pub minimum: Option<(f64, f64)>,
    pub failure_interval: Option<Interval>,
    /// Disjoint bands sorted by lower end.
    pub basin_bands: Vec<Band>,
    /// Deepest preimage level that still produced a band.
    pub depth: usize,
}

impl BasinReport {
    pub fn table(&self) -> Table {
        let mut t = Table::new(
            "basin",
            &[
                "kind",
                "depth",
                "lo",
                "hi",
                "classification",
                "fixed_point",
                "eigenvalue",
            ],
        );
        let class = match self.classification {
            BasinClass::Global => "global",
            BasinClass::Banded => "banded",
            BasinClass::Unstable => "unstable",
        };
        let row = |kind: &str, depth: Cell, lo: Cell, hi: Cell| {
            vec![
                kind.into(),
                depth,
                lo,
                hi,
                class.into(),
                self.fixed_point.into(),
                self.eigenvalue.into(),
            ]
        };
        t.push(row("summary", self.depth.into(), Cell::Empty, Cell::Empty));
        if let Some((at, v)) = self.minimum {
            t.push(row("minimum", Cell::Empty, at.into(), v.into()));
        }
        if let Some(a0) = self.failure_interval {
            t.push(row("failure_interval", 0usize.into(), a0.lo.into(), a0.hi.into()));
        }
        for b in &self.basin_bands {
            t.push(row("band", b.depth.into(), b.interval.lo.into(), b.interval.hi.into()));
        }
        t
    }
}

fn failed(map: &dyn EnergyMap, x: f64) -> bool {
    map.apply(x).is_none()
}

/// Boundary between a failing and a succeeding point, by bisection.
fn bisect_failure_edge(map: &dyn EnergyMap, mut ok: f64, mut bad: f64, tol: f64) -> f64 {
    while (ok - bad).abs() > tol * ok.abs().max(1.0) {
        let mid = 0.5 * (ok + bad);
        if failed(map, mid) {
            bad = mid;
        } else {
            ok = mid;
        }
    }
    0.5 * (ok + bad)
}

/// `x` in `[lo, hi]` with `P(x) = y` on a monotone branch (`rising` tells the direction).
fn invert_branch(map: &dyn EnergyMap, y: f64, mut lo: f64, mut hi: f64, rising: bool, tol: f64) -> f64 {
    for _ in 0..200 {
        if hi - lo <= tol * hi.abs().max(1.0) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let v = map.signed(mid).unwrap_or(f64::NEG_INFINITY);
        if (v < y) == rising {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

struct Shape {
    argmin: f64,
    min: f64,
    p0: f64,
}

/// Preimage of `target` on a decreasing-then-increasing map.
fn unimodal_preimage(map: &dyn EnergyMap, shape: &Shape, target: Interval, tol: f64) -> Vec<Interval> {
    let mut out = Vec::new();
    let (a, b) = (target.lo.max(shape.min), target.hi);
    if a > b {
        return out;
    }
    // Decreasing branch [0, argmin]: values from p0 down to min.
    if shape.argmin > 0.0 && a <= shape.p0 {
        let lo = if b >= shape.p0 {
            0.0
        } else {
            invert_branch(map, b, 0.0, shape.argmin, false, tol)
        };
        let hi = invert_branch(map, a, 0.0, shape.argmin, false, tol);
        out.push(Interval { lo, hi });
    }
    // Increasing branch [argmin, inf).
    let mut top = shape.argmin.max(1.0) * 2.0;
    while map.signed(top).unwrap_or(f64::NEG_INFINITY) < b && top < 1e15 {
        top *= 2.0;
    }
    let lo = if a <= shape.min {
        shape.argmin
    } else {
        invert_branch(map, a, shape.argmin, top, true, tol)
    };
    let hi = invert_branch(map, b, shape.argmin, top, true, tol);
    if hi > lo {
        out.push(Interval { lo, hi });
    }
    out
}

/// Preimage of `target` found on a sample grid and refined by bisection.
fn sampled_preimage(map: &dyn EnergyMap, xs: &[f64], vs: &[Option<f64>], target: Interval, tol: f64) -> Vec<Interval> {
    let inside = |v: Option<f64>| v.is_some_and(|v| target.contains(v));
    let edge = |mut inn: f64, mut out: f64| {
        while (inn - out).abs() > tol * inn.abs().max(1.0) {
            let mid = 0.5 * (inn + out);
            if inside(map.apply(mid)) {
                inn = mid;
            } else {
                out = mid;
            }
        }
        0.5 * (inn + out)
    };
    let mut bands = Vec::new();
    let mut start: Option<f64> = None;
    for i in 0..xs.len() {
        let here = inside(vs[i]);
        match (start, here) {
            (None, true) => start = Some(if i == 0 { xs[0] } else { edge(xs[i], xs[i - 1]) }),
            (Some(s), false) => {
                bands.push(Interval {
                    lo: s,
                    hi: edge(xs[i - 1], xs[i]),
                });
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        bands.push(Interval {
            lo: s,
            hi: *xs.last().unwrap(),
        });
    }
    bands
}

/// Basin structure of `map` around its fixed point.
///
/// Global when the eigenvalue is nonnegative or the map never fails;
/// otherwise the failure set and its preimages up to `preimage_depth` are
/// reported as bands. Bands narrower than `resolution` are dropped.
pub fn classify_map_basin(
    map: &dyn EnergyMap,
    fixed_point: f64,
    eigenvalue: f64,
    search_upper: f64,
    preimage_depth: usize,
    resolution: f64,
) -> BasinReport {
    let mut report = BasinReport {
        classification: BasinClass::Global,
        fixed_point,
        eigenvalue,
        minimum: None,
        failure_interval: None,
        basin_bands: Vec::new(),
        depth: 0,
    };
    if eigenvalue.abs() >= 1.0 {
        report.classification = BasinClass::Unstable;
        return report;
    }
    if eigenvalue >= 0.0 {
        return report;
    }

    let tol = (resolution * 1e-3).max(1e-14);
    let value = |x: f64| map.signed(x).unwrap_or(f64::NEG_INFINITY);
    let grid_n = 400;
    let xs: Vec<f64> = (0..=grid_n).map(|i| search_upper * i as f64 / grid_n as f64).collect();
    let vs: Vec<Option<f64>> = if map.unimodal() {
        Vec::new()
    } else {
        xs.iter().map(|&x| map.apply(x)).collect()
    };

    let (argmin, min) = if map.unimodal() {
        if value(1e-7) >= value(0.0) {
            (0.0, value(0.0))
        } else {
            let mut hi = 1.0;
            while value(2.0 * hi) < value(hi) && hi < 1e12 {
                hi *= 2.0;
            }
            golden_section(value, 0.0, 2.0 * hi, 1e-12)
        }
    } else {
        let (i, _) = xs
            .iter()
            .enumerate()
            .map(|(i, &x)| (i, value(x)))
            .fold((0, f64::INFINITY), |acc, (i, v)| if v < acc.1 { (i, v) } else { acc });
        let lo = xs[i.saturating_sub(1)];
        let hi = xs[(i + 1).min(grid_n)];
        golden_section(value, lo, hi, 1e-10)
    };
    report.minimum = Some((argmin, min));
    if !failed(map, argmin) {
        return report;
    }

    report.classification = BasinClass::Banded;
    let a0 = if map.unimodal() {
        let lo = if failed(map, 0.0) {
            0.0
        } else {
            bisect_failure_edge(map, 0.0, argmin, tol)
        };
        let mut top = argmin.max(1.0) * 2.0;
        while failed(map, top) && top < 1e15 {
            top *= 2.0;
        }
        Interval {
            lo,
            hi: bisect_failure_edge(map, top, argmin, tol),
        }
    } else {
        let i = xs
            .iter()
            .position(|&x| (x - argmin).abs() < f64::EPSILON)
            .unwrap_or_else(|| {
                xs.iter()
                    .enumerate()
                    .min_by(|a, b| (a.1 - argmin).abs().total_cmp(&(b.1 - argmin).abs()))
                    .map(|(i, _)| i)
                    .unwrap()
            });
        let mut l = i;
        while l > 0 && vs[l - 1].is_none() {
            l -= 1;
        }
        let mut r = i;
        while r < grid_n && vs[r + 1].is_none() {
            r += 1;
        }
        let lo = if l == 0 && vs[0].is_none() {
            0.0
        } else {
            bisect_failure_edge(map, xs[l.saturating_sub(1)], argmin, tol)
        };
        let hi = if r == grid_n {
            search_upper
        } else {
            bisect_failure_edge(map, xs[r + 1], argmin, tol)
        };
        Interval { lo, hi }
    };
    report.failure_interval = Some(a0);

    let shape = Shape {
        argmin,
        min,
        p0: value(0.0),
    };
    let mut frontier = vec![a0];
    for level in 1..=preimage_depth {
        let mut next = Vec::new();
        for target in &frontier {
            let pre = if map.unimodal() {
                unimodal_preimage(map, &shape, *target, tol)
            } else {
                sampled_preimage(map, &xs, &vs, *target, tol)
            };
            next.extend(
                pre.into_iter()
                    .filter(|b| b.width() >= resolution && !(b.lo >= a0.lo && b.hi <= a0.hi)),
            );
        }
        if next.is_empty() {
            break;
        }
        report.depth = level;
        report
            .basin_bands
            .extend(next.iter().map(|&interval| Band { depth: level, interval }));
        frontier = next;
    }
    report
        .basin_bands
        .sort_by(|a, b| a.interval.lo.total_cmp(&b.interval.lo));
    // Neighbouring bands share an edge; independent bisections can cross it.
    for i in 1..report.basin_bands.len() {
        let (left, right) = report.basin_bands.split_at_mut(i);
        let (a, b) = (&mut left[i - 1].interval, &mut right[0].interval);
        if a.hi > b.lo {
            let edge = 0.5 * (a.hi + b.lo);
            a.hi = edge;
            b.lo = edge;
        }
    }
    report
}

/// Basin report for the closed-form or simulated map of `params`.
pub fn classify_basin(
    params: &ModelParams,
    engine: MapEngine,
    config: &SimConfig,
    preimage_depth: usize,
    resolution: f64,
) -> Result<BasinReport> {
    let params = params.validated()?;
    match engine {
        MapEngine::ClosedForm => {
            let fp = massless::fixed_point(&params)?;
            let lambda = massless::eigenvalue(&params, fp);
            let map = ClosedFormMap::new(params);
            let upper = (5.0 * fp).max(3.0 * params.eps_inj).max(10.0);
            Ok(classify_map_basin(&map, fp, lambda, upper, preimage_depth, resolution))
        }
        MapEngine::Simulate => {
            let map = SimulatedMap::new(params, *config);
            let guess = massless::fixed_point(&params).unwrap_or(1.0).max(1.0);
            let upper = (5.0 * guess).max(3.0 * params.eps_inj).max(10.0);
            let roots = find_fixed_points(&map, 0.0, upper, 128);
            let mut best: Option<(f64, f64)> = None;
            for r in roots {
                let l = numeric_eigenvalue(&map, r, None)?;
                if best.is_none() || (l.abs() < 1.0 && best.is_some_and(|(_, bl)| bl.abs() >= 1.0)) {
                    best = Some((r, l));
                }
            }
            let (fp, lambda) = best.ok_or(Error::NoRoot { lo: 0.0, hi: upper })?;
            let upper = (5.0 * fp).max(3.0 * params.eps_inj).max(10.0);
            Ok(classify_map_basin(&map, fp, lambda, upper, preimage_depth, resolution))
        }
    }
}
