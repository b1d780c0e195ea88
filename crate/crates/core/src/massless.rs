//! Closed-form hop-to-hop energy map for a massless foot.
//!
//! Only `eps_inj`, `phi` and `kappa_c` of [`ModelParams`] enter; `mu`,
//! `lambda_c` and friction are ignored.

use serde::{Deserialize, Serialize};

use crate::cubic;
use crate::error::{Error, Result};
use crate::model::ModelParams;

/// Polynomial coefficients of the depth-ratio form of the map.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MapCoefficients {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub kappa_eq_c: f64,
    pub phi_eff: f64,
}

impl MapCoefficients {
    pub fn new(eps_inj: f64, phi: f64, kappa_c: f64) -> Self {
        let pe = phi.max(1.0);
        let k = kappa_c;
        let s = (2.0 * eps_inj).sqrt();
        Self {
            a: k * pe * pe + 2.0 * pe - 1.0,
            b: (k * pe * pe + 1.0) * s,
            c: 2.0 * eps_inj * k * (2.0 * pe - 1.0),
            d: 2.0 * eps_inj * k * s,
            kappa_eq_c: k / (1.0 + k),
            phi_eff: pe,
        }
    }

    pub fn from_params(params: &ModelParams) -> Self {
        Self::new(params.eps_inj, params.phi, params.kappa_c)
    }

    /// `(a xi^3 + c xi) / (b xi^2 + d)`; its square times `eps_inj` is the post-injection loss.
    pub fn ratio(&self, xi: f64) -> f64 {
        (self.a * xi.powi(3) + self.c * xi) / (self.b * xi * xi + self.d)
    }

    pub fn ratio_derivative(&self, xi: f64) -> f64 {
        let num = self.a * xi.powi(3) + self.c * xi;
        let den = self.b * xi * xi + self.d;
        ((3.0 * self.a * xi * xi + self.c) * den - num * 2.0 * self.b * xi) / (den * den)
    }

    pub fn discriminant(&self) -> f64 {
        cubic::discriminant(self.a, self.b, self.c, self.d)
    }
}

/// Efficiency, stability and basin summary of the period-one gait.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaitAnalysis {
    pub fixed_point: f64,
    pub eigenvalue: f64,
    pub efficiency: f64,
    pub stability_margin: f64,
    pub globally_stable: bool,
}

/// Foot depth just before injection when touching down with energy `eps_td`.
pub fn pre_injection_depth(eps_td: f64, kappa_c: f64) -> f64 {
    let k = kappa_c / (1.0 + kappa_c);
    -(1.0 + (1.0 + 2.0 * k * eps_td).sqrt())
}

fn depth_derivative(eps_td: f64, kappa_c: f64) -> f64 {
    let k = kappa_c / (1.0 + kappa_c);
    -k / (1.0 + 2.0 * k * eps_td).sqrt()
}

/// Post-reyield over pre-reyield foot depth.
pub fn depth_ratio(xi_f_minus: f64, params: &ModelParams) -> f64 {
    let pe = params.phi_eff();
    let k = params.kappa_c;
    let e = params.eps_inj;
    let x2 = xi_f_minus * xi_f_minus;
    (2.0 * (2.0 * pe - 1.0) * e * k + (pe * pe * k + 2.0 * pe - 1.0) * x2) / (2.0 * e * k + (pe * pe * k + 1.0) * x2)
}

/// Touchdown energy of the next hop; negative values mean the hop fails.
pub fn map_eval(eps_td: f64, params: &ModelParams) -> f64 {
    let coeffs = MapCoefficients::from_params(params);
    let xi = pre_injection_depth(eps_td, params.kappa_c);
    let r = coeffs.ratio(xi);
    eps_td + params.eps_inj - params.eps_inj * r * r
}

/// Energy lost to the ground over one hop.
pub fn map_loss(eps_td: f64, params: &ModelParams) -> f64 {
    eps_td + params.eps_inj - map_eval(eps_td, params)
}

/// Analytic slope of [`map_eval`].
pub fn map_derivative(eps_td: f64, params: &ModelParams) -> f64 {
    let coeffs = MapCoefficients::from_params(params);
    let xi = pre_injection_depth(eps_td, params.kappa_c);
    let r = coeffs.ratio(xi);
    let dr = coeffs.ratio_derivative(xi);
    1.0 - 2.0 * params.eps_inj * r * dr * depth_derivative(eps_td, params.kappa_c)
}

/// Period-one touchdown energy, from the unique real root of the fixed-point cubic.
pub fn fixed_point(params: &ModelParams) -> Result<f64> {
    fixed_point_depth(params).map(|(eps, _)| eps)
}

/// Fixed point together with its pre-injection depth.
pub fn fixed_point_depth(params: &ModelParams) -> Result<(f64, f64)> {
    let no_gait = || Error::NoGait {
        eps_inj: params.eps_inj,
        minimum: min_injected_energy(params.phi, params.kappa_c),
    };
    if params.eps_inj <= 0.0 {
        return Err(no_gait());
    }
    let co = MapCoefficients::from_params(params);
    let disc = co.discriminant();
    let roots = cubic::real_roots(co.a, co.b, co.c, co.d);
    if !(disc < 0.0) && roots.len() != 1 {
        return Err(Error::AmbiguousCubicRoot { discriminant: disc });
    }
    let xi = roots[0];
    if xi > -2.0 {
        // Tolerate rounding exactly on the existence boundary.
        if xi > -2.0 + 1e-12 {
            return Err(no_gait());
        }
        return Ok((0.0, -2.0));
    }
    let eps = (xi * xi + 2.0 * xi) / (2.0 * co.kappa_eq_c);
    Ok((eps.max(0.0), xi))
}

/// Map slope at the fixed point `eps_star`.
pub fn eigenvalue(params: &ModelParams, eps_star: f64) -> f64 {
    map_derivative(eps_star, params)
}

/// Smallest injected energy for which a period-one gait exists.
pub fn min_injected_energy(phi: f64, kappa_c: f64) -> f64 {
    if phi <= 1.0 {
        return 2.0;
    }
    let boundary = |e: f64| {
        let co = MapCoefficients::new(e, phi, kappa_c);
        8.0 * co.a + 2.0 * co.c - 4.0 * co.b - co.d
    };
    let mut hi = 2.0;
    while boundary(hi) > 0.0 {
        hi *= 2.0;
        if hi > 1e12 {
            return f64::INFINITY;
        }
    }
    let mut lo = 0.0;
    while hi - lo > 1e-13 * hi.max(1.0) {
        let mid = 0.5 * (lo + hi);
        if boundary(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Location and value of the map minimum over `[0, inf)`.
///
/// Uses the decreasing-then-increasing shape: bracket the sign change of the
/// slope, then golden-section search.
pub fn map_minimum(params: &ModelParams) -> (f64, f64) {
    if map_derivative(0.0, params) >= 0.0 {
        return (0.0, map_eval(0.0, params));
    }
    let mut hi = 1.0;
    while map_derivative(hi, params) < 0.0 && hi < 1e12 {
        hi *= 2.0;
    }
    let (x, v) = golden_section(|e| map_eval(e, params), 0.0, hi, 1e-12);
    (x, v)
}

pub(crate) fn golden_section(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol * hi.abs().max(1.0) {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        }
    }
    let x = 0.5 * (lo + hi);
    (x, f(x))
}

/// Stability margin `1 - lambda^2` inside the stable band, zero outside.
pub fn stability_margin(lambda: f64) -> f64 {
    if lambda.abs() <= 1.0 {
        1.0 - lambda * lambda
    } else {
        0.0
    }
}

pub fn gait_metrics(params: &ModelParams) -> Result<GaitAnalysis> {
    let eps = fixed_point(params)?;
    let lambda = eigenvalue(params, eps);
    let globally_stable = lambda >= 0.0 || (lambda.abs() < 1.0 && map_minimum(params).1 > 0.0);
    Ok(GaitAnalysis {
        fixed_point: eps,
        eigenvalue: lambda,
        efficiency: eps / (params.eps_inj + eps),
        stability_margin: stability_margin(lambda),
        globally_stable,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(eps_inj: f64, phi: f64, kappa_c: f64) -> ModelParams {
        ModelParams::new(eps_inj, phi, kappa_c, 0.0).unwrap()
    }

    #[test]
    fn depth_examples() {
        assert_eq!(pre_injection_depth(0.0, 0.37), -2.0);
        assert!((pre_injection_depth(10.0, 0.1) + 2.67874).abs() < 1e-5);
        assert!((pre_injection_depth(60.8065, 0.1) + 4.47214).abs() < 1e-5);
    }

    #[test]
    fn depth_ratio_examples() {
        for xi in [-2.0, -3.5, -10.0] {
            assert!((depth_ratio(xi, &p(7.0, 0.6, 0.3)) - 1.0).abs() < 1e-15);
            assert!((depth_ratio(xi, &p(7.0, 1.0, 0.3)) - 1.0).abs() < 1e-15);
        }
        assert!((depth_ratio(-2.0, &p(10.0, 2.0, 1e-12)) - 3.0).abs() < 1e-9);
        assert!((depth_ratio(-2.0, &p(10.0, 2.0, 0.1)) - 19.6 / 7.6).abs() < 1e-12);
    }

    #[test]
    fn depth_ratio_matches_coefficient_form() {
        // The loss ratio squared equals (depth ratio * xi)^2 / (2 eps_inj).
        let params = p(13.0, 1.8, 0.4);
        let co = MapCoefficients::from_params(&params);
        for xi in [-2.0, -2.7, -5.0, -30.0] {
            let r = depth_ratio(xi, &params) * xi / (2.0 * params.eps_inj).sqrt();
            assert!((r - co.ratio(xi)).abs() < 1e-12 * r.abs());
        }
    }

    #[test]
    fn map_examples() {
        assert!((map_eval(0.0, &p(10.0, 2.0, 0.1)) + 3.3019).abs() < 1e-3);
        let fp = map_eval(60.8065, &p(10.0, 1.0, 0.1));
        assert!((fp - 60.8065).abs() < 1e-3);
        for k in [0.01, 0.1, 3.0] {
            assert!(map_eval(0.0, &p(2.0, 0.5, k)).abs() < 1e-12);
        }
    }

    #[test]
    fn fixed_point_matches_phi_le_one_inversion() {
        let params = p(10.0, 1.0, 0.1);
        let (eps, xi) = fixed_point_depth(&params).unwrap();
        let keq = 0.1 / 1.1;
        let oracle = (((2.0f64 * 10.0).sqrt() - 1.0).powi(2) - 1.0) / (2.0 * keq);
        assert!((eps - oracle).abs() < 1e-9 * oracle);
        assert!((xi + 4.47214).abs() < 1e-5);
        let s = (1.0 + 2.0 * keq * eps).sqrt();
        let lambda = eigenvalue(&params, eps);
        assert!((lambda - (1.0 - (1.0 + s) * keq / s)).abs() < 1e-12);
        assert!((lambda - 0.8829).abs() < 1e-4);
    }

    #[test]
    fn fixed_point_paper_points() {
        assert!((fixed_point(&p(12.84, 1.52, 0.1)).unwrap() - 10.0).abs() < 0.15);
        let params = p(19.0, 2.235, 0.1);
        let eps = fixed_point(&params).unwrap();
        assert!((eps - 1.04).abs() < 0.01);
        assert!((eigenvalue(&params, eps) + 0.32).abs() < 0.01);
    }

    #[test]
    fn eigenvalue_matches_finite_difference() {
        for params in [
            p(10.0, 1.0, 0.1),
            p(19.0, 2.235, 0.1),
            p(45.88, 2.7, 0.1),
            p(6.0, 1.3, 2.0),
        ] {
            let eps = fixed_point(&params).unwrap();
            let h = 1e-5;
            let fd = (map_eval(eps + h, &params) - map_eval(eps - h, &params)) / (2.0 * h);
            assert!((fd - eigenvalue(&params, eps)).abs() < 1e-6);
        }
    }

    #[test]
    fn no_gait_below_minimum() {
        assert!(matches!(fixed_point(&p(1.0, 0.8, 0.1)), Err(Error::NoGait { .. })));
        assert!(matches!(fixed_point(&p(0.0, 0.8, 0.1)), Err(Error::NoGait { .. })));
        let m = min_injected_energy(2.0, 0.25);
        assert!(fixed_point(&p(m * 0.99, 2.0, 0.25)).is_err());
        assert!(fixed_point(&p(m * 1.01, 2.0, 0.25)).unwrap() >= 0.0);
    }

    #[test]
    fn min_injected_energy_examples() {
        assert_eq!(min_injected_energy(0.7, 0.3), 2.0);
        let m = min_injected_energy(2.0, 0.25);
        assert!((m - 11.7).abs() < 0.1, "{m}");
        assert!(map_eval(0.0, &p(m, 2.0, 0.25)).abs() < 1e-8);
        assert!(min_injected_energy(3.0, 0.25) > m);
        assert!(min_injected_energy(2.0, 0.5) < m);
    }

    #[test]
    fn metrics() {
        let g = gait_metrics(&p(10.0, 1.0, 0.1)).unwrap();
        assert!((g.efficiency - 0.8588).abs() < 1e-4);
        assert!((g.stability_margin - 0.2205).abs() < 1e-3);
        assert!(g.globally_stable);
        assert!(!gait_metrics(&p(19.0, 2.235, 0.1)).unwrap().globally_stable);
        assert_eq!(stability_margin(1.0), 0.0);
        assert_eq!(stability_margin(-1.0), 0.0);
        assert_eq!(stability_margin(-1.5), 0.0);
    }

    #[test]
    fn map_minimum_fig11() {
        let (at, value) = map_minimum(&p(19.0, 2.235, 0.1));
        assert!((at - 14.56).abs() < 0.05);
        assert!((value + 0.506).abs() < 0.005);
    }
}
