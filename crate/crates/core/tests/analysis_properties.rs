use proptest::prelude::*;

use softhop::analysis::{
    bifurcation_scan, classify_basin, numeric_eigenvalue, numeric_fixed_point, BasinClass, ClosedFormMap, EnergyMap,
    MapEngine, ScanSettings, SweepParameter,
};
use softhop::massless;
use softhop::model::ModelParams;
use softhop::sim::SimConfig;

fn params() -> impl Strategy<Value = ModelParams> {
    (0.5..100.0f64, 0.2..4.0f64, -2.0..1.0f64)
        .prop_map(|(e, phi, lk)| ModelParams::new(e, phi, 10f64.powf(lk), 0.0).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn global_basin_converges_everywhere(p in params(), seed in 0u64..1000) {
        let Ok(report) = classify_basin(&p, MapEngine::ClosedForm, &SimConfig::default(), 12, 1e-6) else {
            return Ok(());
        };
        prop_assume!(report.classification == BasinClass::Global);
        for i in 0..1000u64 {
            let mut x = 1000.0 * ((i * 7919 + seed * 104_729) % 1000) as f64 / 1000.0;
            let mut converged = false;
            for _ in 0..10_000 {
                x = massless::map_eval(x, &p);
                prop_assert!(x >= 0.0, "escape from {p:?}");
                if (x - report.fixed_point).abs() < 1e-6 {
                    converged = true;
                    break;
                }
            }
            prop_assert!(converged);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn banded_basins_have_oscillating_eigenvalue(p in params()) {
        if let Ok(report) = classify_basin(&p, MapEngine::ClosedForm, &SimConfig::default(), 8, 1e-6) {
            if report.classification == BasinClass::Banded {
                prop_assert!(report.eigenvalue > -1.0 && report.eigenvalue < 0.0);
                prop_assert!(report.failure_interval.is_some());
            }
            if report.eigenvalue >= 0.0 && report.eigenvalue < 1.0 {
                prop_assert_eq!(report.classification, BasinClass::Global);
            }
        }
    }

    #[test]
    fn bands_map_into_failure_set(phi in 2.0..3.0f64, e in 10.0..40.0f64) {
        let p = ModelParams::new(e, phi, 0.1, 0.0).unwrap();
        let Ok(report) = classify_basin(&p, MapEngine::ClosedForm, &SimConfig::default(), 8, 1e-6) else {
            return Ok(());
        };
        prop_assume!(report.classification == BasinClass::Banded);
        let a0 = report.failure_interval.unwrap();
        let map = ClosedFormMap::new(p);
        for w in report.basin_bands.windows(2) {
            prop_assert!(w[0].interval.hi <= w[1].interval.lo);
        }
        for band in &report.basin_bands {
            for k in 0..=8 {
                let mut x = band.interval.lo + band.interval.width() * (0.01 + 0.98 * k as f64 / 8.0);
                for _ in 0..band.depth {
                    x = map.signed(x).unwrap();
                }
                prop_assert!(x >= a0.lo - 1e-6 && x <= a0.hi + 1e-6, "band {band:?} lands at {x}");
            }
        }
    }

    #[test]
    fn numeric_analysis_matches_closed_form(p in params()) {
        let Ok(fp) = massless::fixed_point(&p) else { return Ok(()) };
        let lambda = massless::eigenvalue(&p, fp);
        prop_assume!(lambda.abs() < 0.95 && fp > 1e-3);
        let map = ClosedFormMap::new(p);
        let numeric = numeric_fixed_point(&map, 0.5 * fp, 1.5 * fp).unwrap();
        prop_assert!((numeric - fp).abs() <= 1e-9 * fp.max(1.0));
        let slope = numeric_eigenvalue(&map, fp, None).unwrap();
        prop_assert!((slope - lambda).abs() <= 1e-6, "{slope} vs {lambda}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn scan_is_scheduling_independent(phi in 0.5..3.0f64, lk in -1.5..0.5f64, start in 5.0..20.0f64) {
        let base = ModelParams::new(start, phi, 10f64.powf(lk), 0.0).unwrap();
        let grid: Vec<f64> = (0..16).map(|i| start + 0.75 * i as f64).collect();
        let mut settings = ScanSettings { transient: 200, samples: 64, ..ScanSettings::default() };
        let parallel = bifurcation_scan(&base, SweepParameter::EpsInj, &grid, MapEngine::ClosedForm, &SimConfig::default(), &settings).unwrap();
        settings.parallel = false;
        let serial = bifurcation_scan(&base, SweepParameter::EpsInj, &grid, MapEngine::ClosedForm, &SimConfig::default(), &settings).unwrap();
        prop_assert_eq!(parallel, serial);
    }
}
