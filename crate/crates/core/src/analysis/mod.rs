//! Dynamics of one-dimensional hop-to-hop energy maps.
//!
//! Everything here works through [`EnergyMap`], so the same routines apply to
//! the closed-form massless map and to the simulated finite-foot-mass map.

pub mod basin;
pub mod bifurcation;
pub mod fixed_point;
pub mod map_fn;
pub mod period;
pub mod surface;

pub use basin::{classify_basin, classify_map_basin, Band, BasinClass, BasinReport, Interval};
pub use bifurcation::{
    bifurcation_scan, bifurcation_table, BifurcationCell, FixedPointBranch, ScanSettings, SweepParameter,
};
pub use fixed_point::{find_fixed_points, numeric_eigenvalue, numeric_fixed_point};
pub use map_fn::{ClosedFormMap, EnergyMap, FnMap, MapEngine, SimulatedMap};
pub use period::{iterate_and_detect_period, BifurcationRecord, PeriodOutcome};
pub use surface::{
    constant_eigenvalue_curve, constant_fixed_point_surface, solve_eps_inj_for_fixed_point, surface_table, CurvePoint,
    SurfaceCell, SurfacePoint,
};
