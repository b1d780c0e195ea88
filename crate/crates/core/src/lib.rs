//! Vertical hopping of a spring-legged monopod on plastically yielding ground.
//!
//! [`model`] holds the dimensionless template, [`sim`] the event-driven hybrid
//! simulator, [`massless`] the closed-form map for a massless foot and
//! [`analysis`] the fixed-point, bifurcation and basin tools that work on
//! either map.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod cubic;
pub mod error;
pub mod integrate;
pub mod massless;
pub mod model;
pub mod output;
pub mod sim;

pub use error::{Error, Result};
pub use model::{
    actuator_force, com_kinetic_energy, dimensionalize, ground_force, liftoff_reset, nondimensionalize, spring_update,
    CharacteristicScales, DimensionalSpec, DimensionlessDesign, HopFailure, HopRecord, HopperState, HybridDomain,
    LegSpring, ModelParams, SpringMode, TransitionEvent, TransitionKind,
};
pub use sim::{simulate_hop, simulate_trajectory, SimConfig, Trajectory};
