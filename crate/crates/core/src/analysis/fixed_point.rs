use super::map_fn::EnergyMap;
use crate::error::{Error, Result};

const FP_TOL: f64 = 1e-12;

/// `P(eps) - eps`, with failed hops counted as strictly negative.
fn excess(map: &dyn EnergyMap, eps: f64) -> Option<f64> {
    map.apply(eps).map(|p| p - eps)
}

fn is_positive(v: Option<f64>) -> bool {
    matches!(v, Some(x) if x > 0.0)
}

/// Refines a bracket with a sign change of `P(eps) - eps` (Illinois false position with bisection fallback).
fn refine(map: &dyn EnergyMap, mut lo: f64, mut hi: f64, mut g_lo: Option<f64>, mut g_hi: Option<f64>) -> f64 {
    let lo_pos = is_positive(g_lo);
    let mut side = 0i8;
    for _ in 0..300 {
        if hi - lo <= FP_TOL * hi.abs().max(1.0) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let trial = match (g_lo, g_hi) {
            (Some(a), Some(b)) if a != b => {
                let x = hi - b * (hi - lo) / (b - a);
                let span = hi - lo;
                if x > lo + 0.01 * span && x < hi - 0.01 * span {
                    x
                } else {
                    mid
                }
            }
            _ => mid,
        };
        let g = excess(map, trial);
        if g == Some(0.0) {
            return trial;
        }
        if is_positive(g) == lo_pos {
            lo = trial;
            g_lo = g;
            if side == 1 {
                g_hi = g_hi.map(|v| 0.5 * v);
            }
            side = 1;
        } else {
            hi = trial;
            g_hi = g;
            if side == -1 {
                g_lo = g_lo.map(|v| 0.5 * v);
            }
            side = -1;
        }
    }
    0.5 * (lo + hi)
}

/// Period-one fixed point of `map` inside `[lo, hi]`.
///
/// Uses the endpoints when they bracket a root, otherwise scans the interval
/// for the first sign change of `P(eps) - eps`.
pub fn numeric_fixed_point(map: &dyn EnergyMap, lo: f64, hi: f64) -> Result<f64> {
    if !(lo.is_finite() && hi.is_finite() && hi > lo) {
        return Err(Error::InvalidParameter {
            name: "bracket",
            reason: format!("need finite lo < hi, got [{lo}, {hi}]"),
        });
    }
    let g_lo = excess(map, lo);
    let g_hi = excess(map, hi);
    if g_lo.is_some() && g_hi.is_some() && is_positive(g_lo) != is_positive(g_hi) {
        return Ok(refine(map, lo, hi, g_lo, g_hi));
    }
    find_fixed_points(map, lo, hi, 64)
        .first()
        .copied()
        .ok_or(Error::NoRoot { lo, hi })
}

/// All fixed points found by scanning `n` cells of `[lo, hi]`, ascending.
///
/// Only sign changes between two successful hops count; the edges of the
/// failure set are not fixed points.
pub fn find_fixed_points(map: &dyn EnergyMap, lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let n = n.max(1);
    let xs: Vec<f64> = (0..=n).map(|i| lo + (hi - lo) * i as f64 / n as f64).collect();
    let gs: Vec<Option<f64>> = xs.iter().map(|&x| excess(map, x)).collect();
    let mut roots = Vec::new();
    for i in 0..n {
        match (gs[i], gs[i + 1]) {
            (Some(0.0), _) => roots.push(xs[i]),
            (Some(a), Some(b)) if (a > 0.0) != (b > 0.0) && b != 0.0 => {
                roots.push(refine(map, xs[i], xs[i + 1], gs[i], gs[i + 1]));
            }
            _ => {}
        }
    }
    if let Some(Some(b)) = gs.last() {
        if *b == 0.0 {
            roots.push(xs[n]);
        }
    }
    roots
}

/// Map slope at `eps_star` by Richardson-refined central differences.
///
/// `step` defaults to `1e-4 * max(1, eps_star)`; near zero a one-sided
/// second-order stencil is used instead.
pub fn numeric_eigenvalue(map: &dyn EnergyMap, eps_star: f64, step: Option<f64>) -> Result<f64> {
    let h = step.unwrap_or(1e-4 * eps_star.abs().max(1.0));
    if !(h > 0.0) {
        return Err(Error::InvalidParameter {
            name: "step",
            reason: format!("must be > 0, got {h}"),
        });
    }
    let eval = |x: f64| map.signed(x).ok_or(Error::MapFailure { at: x });
    let diff = |h: f64| -> Result<f64> {
        if eps_star - h >= 0.0 {
            Ok((eval(eps_star + h)? - eval(eps_star - h)?) / (2.0 * h))
        } else {
            Ok((-3.0 * eval(eps_star)? + 4.0 * eval(eps_star + h)? - eval(eps_star + 2.0 * h)?) / (2.0 * h))
        }
    };
    let d1 = diff(h)?;
    let d2 = diff(0.5 * h)?;
    Ok((4.0 * d2 - d1) / 3.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::map_fn::{ClosedFormMap, FnMap};
    use crate::massless;
    use crate::model::ModelParams;

    #[test]
    fn closed_form_fixed_point() {
        let p = ModelParams::new(10.0, 1.0, 0.1, 0.0).unwrap();
        let m = ClosedFormMap::new(p);
        let fp = numeric_fixed_point(&m, 0.0, 200.0).unwrap();
        assert!((fp - massless::fixed_point(&p).unwrap()).abs() < 1e-8);
        let lam = numeric_eigenvalue(&m, fp, None).unwrap();
        assert!((lam - massless::eigenvalue(&p, fp)).abs() < 1e-6);
    }

    #[test]
    fn no_gait_below_minimum() {
        let m = ClosedFormMap::new(ModelParams::new(1.0, 0.8, 0.1, 0.0).unwrap());
        assert!(matches!(numeric_fixed_point(&m, 0.0, 100.0), Err(Error::NoRoot { .. })));
    }

    #[test]
    fn linear_map() {
        let m = FnMap(|e: f64| 0.5 * e + 3.0);
        assert!((numeric_fixed_point(&m, 0.0, 10.0).unwrap() - 6.0).abs() < 1e-9);
        assert!((numeric_eigenvalue(&m, 6.0, None).unwrap() - 0.5).abs() < 1e-10);
        assert!((numeric_eigenvalue(&m, 0.0, Some(0.1)).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn several_fixed_points() {
        // Crosses the identity at 1, 2 and 3.
        let m = FnMap(|e: f64| e + (e - 1.0) * (e - 2.0) * (e - 3.0));
        let roots = find_fixed_points(&m, 0.0, 4.0, 40);
        assert_eq!(roots.len(), 3);
        for (r, want) in roots.iter().zip([1.0, 2.0, 3.0]) {
            assert!((r - want).abs() < 1e-9);
        }
    }
}
