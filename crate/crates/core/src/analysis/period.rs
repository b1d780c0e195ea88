use serde::{Deserialize, Serialize};

use super::map_fn::EnergyMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PeriodOutcome {
    Periodic(usize),
    Aperiodic,
    Failed,
}

impl PeriodOutcome {
    pub fn period(self) -> Option<usize> {
        match self {
            PeriodOutcome::Periodic(n) => Some(n),
            _ => None,
        }
    }

    pub fn label(self) -> String {
        match self {
            PeriodOutcome::Periodic(n) => n.to_string(),
            PeriodOutcome::Aperiodic => "aperiodic".to_string(),
            PeriodOutcome::Failed => "failed".to_string(),
        }
    }
}

/// Post-transient behaviour of one orbit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BifurcationRecord {
    pub swept_value: f64,
    pub seed: f64,
    pub attractor_samples: Vec<f64>,
    pub period: PeriodOutcome,
    /// An attracting cycle was reached.
    pub stable: bool,
}

/// Smallest `n <= samples.len() / 4` with `x[i + n] ~ x[i]` throughout.
pub fn detect_period(samples: &[f64], tol: f64) -> Option<usize> {
    let max_n = samples.len() / 4;
    (1..=max_n.max(1)).find(|&n| {
        n < samples.len()
            && samples.windows(n + 1).all(|w| {
                let (a, b) = (w[0], w[n]);
                (a - b).abs() <= tol * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
            })
    })
}

/// Iterates `map` from `eps0`, discards `transient` iterates and classifies the next `samples`.
///
/// Returns the outcome and the collected samples (empty on failure during the
/// transient, truncated on failure while sampling).
pub fn iterate_and_detect_period(
    map: &dyn EnergyMap,
    eps0: f64,
    transient: usize,
    samples: usize,
    tol: f64,
) -> (PeriodOutcome, Vec<f64>) {
    let mut x = eps0;
    for _ in 0..transient {
        match map.apply(x) {
            Some(v) => x = v,
            None => return (PeriodOutcome::Failed, Vec::new()),
        }
    }
    let mut out = Vec::with_capacity(samples);
    for _ in 0..samples.max(1) {
        match map.apply(x) {
            Some(v) => {
                x = v;
                out.push(v);
            }
            None => return (PeriodOutcome::Failed, out),
        }
    }
    let outcome = match detect_period(&out, tol) {
        Some(n) => PeriodOutcome::Periodic(n),
        None => PeriodOutcome::Aperiodic,
    };
    (outcome, out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::map_fn::FnMap;

    #[test]
    fn contraction_is_period_one() {
        let m = FnMap(|e: f64| 0.5 * e + 3.0);
        let (p, s) = iterate_and_detect_period(&m, 100.0, 100, 64, 1e-5);
        assert_eq!(p, PeriodOutcome::Periodic(1));
        assert!(s.iter().all(|v| (v - 6.0).abs() < 1e-9));
    }

    #[test]
    fn logistic_cycles_and_chaos() {
        let logistic = |r: f64| move |x: f64| r * x * (1.0 - x);
        let (p, _) = iterate_and_detect_period(&FnMap(logistic(3.2)), 0.3, 500, 256, 1e-5);
        assert_eq!(p, PeriodOutcome::Periodic(2));
        let (p, _) = iterate_and_detect_period(&FnMap(logistic(3.5)), 0.3, 500, 256, 1e-5);
        assert_eq!(p, PeriodOutcome::Periodic(4));
        let (p, s) = iterate_and_detect_period(&FnMap(logistic(3.9)), 0.3, 500, 256, 1e-5);
        assert_eq!(p, PeriodOutcome::Aperiodic);
        assert_eq!(s.len(), 256);
    }

    #[test]
    fn failure_is_reported() {
        let m = FnMap(|e: f64| e - 1.0);
        let (p, _) = iterate_and_detect_period(&m, 3.5, 10, 10, 1e-5);
        assert_eq!(p, PeriodOutcome::Failed);
    }
}
