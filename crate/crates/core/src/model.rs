//! Domain types, controller laws and force laws of the monopod/terrain template.
//!
//! Everything here is dimensionless: masses are scaled by the total robot
//! mass, lengths by the weight-support depth `m_u g / k_g` and time by the
//! period scale `sqrt(m_u / k_g)` of the robot mass on the ground spring.
//! In these units the body mass is `1/(1+mu)`, the foot mass `mu/(1+mu)`,
//! gravity is `1` and the ground reaction while yielding is `-xi_f`.

use serde::{Deserialize, Serialize};

use crate::error::{check, Error, Result};

/// Controller, design and terrain parameters of one hopping experiment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Energy injected at every compression-extension transition.
    pub eps_inj: f64,
    /// Commanded ratio of ground-applied force after injection to the yield threshold.
    pub phi: f64,
    /// Compression-mode leg stiffness over ground stiffness.
    pub kappa_c: f64,
    /// Foot mass over body mass.
    pub mu: f64,
    /// Compression-mode unloaded leg length.
    pub lambda_c: f64,
    /// Coulomb friction between body and guiderail; zero disables it.
    #[serde(default)]
    pub phi_fric: f64,
}

impl ModelParams {
    pub const DEFAULT_LAMBDA_C: f64 = 35.0;

    pub fn new(eps_inj: f64, phi: f64, kappa_c: f64, mu: f64) -> Result<Self> {
        Self {
            eps_inj,
            phi,
            kappa_c,
            mu,
            lambda_c: Self::DEFAULT_LAMBDA_C,
            phi_fric: 0.0,
        }
        .validated()
    }

    pub fn with_lambda_c(mut self, lambda_c: f64) -> Result<Self> {
        self.lambda_c = lambda_c;
        self.validated()
    }

    pub fn with_friction(mut self, phi_fric: f64) -> Result<Self> {
        self.phi_fric = phi_fric;
        self.validated()
    }

    /// Checks the parameter invariants and returns `self` unchanged when they hold.
    pub fn validated(self) -> Result<Self> {
        check("eps_inj", self.eps_inj.is_finite() && self.eps_inj >= 0.0, || {
            format!("must be finite and >= 0, got {}", self.eps_inj)
        })?;
        check("phi", self.phi.is_finite() && self.phi > 0.0, || {
            format!("must be finite and > 0, got {}", self.phi)
        })?;
        check("kappa_c", self.kappa_c.is_finite() && self.kappa_c > 0.0, || {
            format!("must be finite and > 0, got {}", self.kappa_c)
        })?;
        check("mu", self.mu.is_finite() && self.mu >= 0.0, || {
            format!("must be finite and >= 0, got {}", self.mu)
        })?;
        check("lambda_c", self.lambda_c.is_finite() && self.lambda_c > 0.0, || {
            format!("must be finite and > 0, got {}", self.lambda_c)
        })?;
        check("phi_fric", self.phi_fric.is_finite() && self.phi_fric >= 0.0, || {
            format!("must be finite and >= 0, got {}", self.phi_fric)
        })?;
        Ok(self)
    }

    /// `max(phi, 1)`: force ratios below one never reyield the ground.
    pub fn phi_eff(&self) -> f64 {
        self.phi.max(1.0)
    }

    pub fn body_mass(&self) -> f64 {
        1.0 / (1.0 + self.mu)
    }

    pub fn foot_mass(&self) -> f64 {
        self.mu / (1.0 + self.mu)
    }

    /// Series stiffness of the compression leg spring and the ground spring.
    pub fn kappa_eq_c(&self) -> f64 {
        self.kappa_c / (1.0 + self.kappa_c)
    }

    pub fn compression_spring(&self) -> LegSpring {
        LegSpring {
            stiffness: self.kappa_c,
            unloaded_length: self.lambda_c,
            mode: SpringMode::Compression,
        }
    }
}

/// Positions and velocities of body and foot, measured upward from the undeformed surface.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct HopperState {
    pub xi_b: f64,
    pub xi_f: f64,
    pub v_b: f64,
    pub v_f: f64,
}

impl HopperState {
    pub fn new(xi_b: f64, xi_f: f64, v_b: f64, v_f: f64) -> Self {
        Self { xi_b, xi_f, v_b, v_f }
    }

    /// Standing on the undeformed surface at rest with the leg unloaded.
    pub fn at_rest(lambda_c: f64) -> Self {
        Self::new(lambda_c, 0.0, 0.0, 0.0)
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.xi_b, self.xi_f, self.v_b, self.v_f]
    }

    pub fn from_array(y: [f64; 4]) -> Self {
        Self::new(y[0], y[1], y[2], y[3])
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|v| v.is_finite())
    }

    pub fn com_position(&self, mu: f64) -> f64 {
        (self.xi_b + mu * self.xi_f) / (1.0 + mu)
    }

    pub fn com_velocity(&self, mu: f64) -> f64 {
        (self.v_b + mu * self.v_f) / (1.0 + mu)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SpringMode {
    Compression,
    Extension,
}

/// The linear spring emulated by the leg actuator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LegSpring {
    pub stiffness: f64,
    pub unloaded_length: f64,
    pub mode: SpringMode,
}

impl LegSpring {
    pub fn new(stiffness: f64, unloaded_length: f64, mode: SpringMode) -> Result<Self> {
        check("stiffness", stiffness.is_finite() && stiffness > 0.0, || {
            format!("must be finite and > 0, got {stiffness}")
        })?;
        check("unloaded_length", unloaded_length.is_finite(), || {
            "must be finite".to_string()
        })?;
        Ok(Self {
            stiffness,
            unloaded_length,
            mode,
        })
    }

    /// Leg compression `unloaded_length - (xi_b - xi_f)`.
    pub fn deflection(&self, state: &HopperState) -> f64 {
        self.unloaded_length - state.xi_b + state.xi_f
    }

    pub fn potential_energy(&self, state: &HopperState) -> f64 {
        let d = self.deflection(state);
        0.5 * self.stiffness * d * d
    }
}

/// The five continuous-dynamics domains of the hybrid model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum HybridDomain {
    Flight,
    YieldingCompression,
    StaticCompression,
    YieldingExtension,
    StaticExtension,
}

impl HybridDomain {
    pub fn is_stance(self) -> bool {
        self != HybridDomain::Flight
    }

    pub fn is_yielding(self) -> bool {
        matches!(
            self,
            HybridDomain::YieldingCompression | HybridDomain::YieldingExtension
        )
    }

    pub fn is_static(self) -> bool {
        matches!(self, HybridDomain::StaticCompression | HybridDomain::StaticExtension)
    }

    pub fn is_extension(self) -> bool {
        matches!(self, HybridDomain::YieldingExtension | HybridDomain::StaticExtension)
    }

    pub fn abbreviation(self) -> &'static str {
        match self {
            HybridDomain::Flight => "F",
            HybridDomain::YieldingCompression => "YC",
            HybridDomain::StaticCompression => "SC",
            HybridDomain::YieldingExtension => "YE",
            HybridDomain::StaticExtension => "SE",
        }
    }
}

impl std::fmt::Display for HybridDomain {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.abbreviation())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TransitionKind {
    Touchdown,
    FootStop,
    Reyield,
    CompressionExtension,
    Liftoff,
}

impl TransitionKind {
    pub fn abbreviation(self) -> &'static str {
        match self {
            TransitionKind::Touchdown => "TD",
            TransitionKind::FootStop => "FS",
            TransitionKind::Reyield => "RY",
            TransitionKind::CompressionExtension => "CE",
            TransitionKind::Liftoff => "LO",
        }
    }
}

impl std::fmt::Display for TransitionKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.abbreviation())
    }
}

/// A switching event, timed from the touchdown that opened the hop.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransitionEvent {
    pub kind: TransitionKind,
    pub time: f64,
}

/// Why a hop did not reach the next touchdown.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HopFailure {
    /// The stance phase can no longer reach liftoff.
    NoLiftoff,
    /// The foot reached its flight apex below the undeformed surface.
    CraterApex,
}

/// Energy ledger of one hop, touchdown to touchdown.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HopRecord {
    pub eps_td_in: f64,
    pub eps_td_out: Option<f64>,
    pub eps_injected: f64,
    pub eps_ground_loss: f64,
    pub eps_lo_loss: f64,
    /// Foot position immediately before the compression-extension transition.
    pub depth_ce: Option<f64>,
    pub events: Vec<TransitionEvent>,
    pub failed: bool,
    pub failure: Option<HopFailure>,
}

impl HopRecord {
    /// `eps_td_out - (eps_td_in + eps_injected - losses)`; `None` for failed hops.
    pub fn ledger_residual(&self) -> Option<f64> {
        self.eps_td_out
            .map(|out| out - (self.eps_td_in + self.eps_injected - self.eps_ground_loss - self.eps_lo_loss))
    }

    /// Stance domain sequence reconstructed from the event log.
    pub fn event_string(&self) -> String {
        self.events
            .iter()
            .map(|e| e.kind.abbreviation())
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Leg actuator force `k (l - xi_b + xi_f)`; positive in compression.
///
/// The caller picks the compression or extension spring.
pub fn actuator_force(state: &HopperState, spring: &LegSpring) -> f64 {
    spring.stiffness * spring.deflection(state)
}

/// Ground reaction on the foot.
///
/// Zero in flight, `-xi_f` while the foot intrudes, and the pinning force
/// `applied + mu/(1+mu)` while the foot rests below the surface.
pub fn ground_force(state: &HopperState, applied_actuator_force: f64, mu: f64) -> f64 {
    if state.xi_f > 0.0 || state.v_f > 0.0 {
        0.0
    } else if state.v_f < 0.0 {
        -state.xi_f
    } else if state.xi_f < 0.0 {
        applied_actuator_force + mu / (1.0 + mu)
    } else {
        // At rest exactly on the undeformed surface the yield threshold is zero.
        0.0
    }
}

/// Kinetic energy of the centre of mass.
pub fn com_kinetic_energy(state: &HopperState, mu: f64) -> f64 {
    let v = state.com_velocity(mu);
    0.5 * v * v
}

/// Gravitational plus leg-spring energy plus kinetic energy of both masses.
///
/// Excludes the energy already dissipated into the ground.
pub fn mechanical_energy(state: &HopperState, spring: &LegSpring, mu: f64) -> f64 {
    let m_b = 1.0 / (1.0 + mu);
    let m_f = mu / (1.0 + mu);
    0.5 * m_b * state.v_b * state.v_b
        + 0.5 * m_f * state.v_f * state.v_f
        + m_b * state.xi_b
        + m_f * state.xi_f
        + spring.potential_energy(state)
}

/// Extension spring chosen at the compression-extension transition.
///
/// Inverts the two controller constraints directly: the stiffness and length
/// change must inject exactly `eps_inj` and must make the ground-applied force
/// equal `phi` times the yield threshold `-xi_f`.
pub fn spring_update(
    state_at_ce: &HopperState,
    compression_spring: &LegSpring,
    params: &ModelParams,
) -> Result<LegSpring> {
    let deflection = compression_spring.deflection(state_at_ce);
    let force = -params.phi * state_at_ce.xi_f - params.foot_mass();
    if !(force > 0.0) {
        return Err(Error::NoValidSpring { force });
    }
    let stored = 2.0 * params.eps_inj + compression_spring.stiffness * deflection * deflection;
    if !(stored > 0.0) {
        return Err(Error::NoValidSpring { force });
    }
    let stiffness = force * force / stored;
    let extension = stored / force;
    Ok(LegSpring {
        stiffness,
        unloaded_length: extension + state_at_ce.xi_b - state_at_ce.xi_f,
        mode: SpringMode::Extension,
    })
}

/// Energy injected by switching from `compression` to `extension` at `state`.
pub fn injected_energy(state: &HopperState, compression: &LegSpring, extension: &LegSpring) -> f64 {
    extension.potential_energy(state) - compression.potential_energy(state)
}

/// Force ratio realised by `extension` at `state`.
pub fn force_ratio(state: &HopperState, extension: &LegSpring, mu: f64) -> f64 {
    (actuator_force(state, extension) + mu / (1.0 + mu)) / (-state.xi_f)
}

/// Flight-controller reset applied at liftoff.
///
/// Treats the foot capture as a perfectly inelastic collision: centre-of-mass
/// position and velocity are kept, both bodies move with the COM velocity and
/// the leg returns to `lambda_c`. Returns the post-reset state and the energy
/// dissipated: the collision loss plus the extension-spring energy discarded.
/// When the leg force equals the foot weight this is
/// `mu (mu + k_e dv^2) / (2 k_e (1 + mu)^2)`.
pub fn liftoff_reset(state: &HopperState, params: &ModelParams, extension_spring: &LegSpring) -> (HopperState, f64) {
    let mu = params.mu;
    let m_b = params.body_mass();
    let m_f = params.foot_mass();
    let x = state.com_position(mu);
    let v = state.com_velocity(mu);
    let reset = HopperState::new(x + m_f * params.lambda_c, x - m_b * params.lambda_c, v, v);

    let dv = state.v_b - state.v_f;
    let loss = 0.5 * m_b * m_f * dv * dv + extension_spring.potential_energy(state);
    (reset, loss)
}

/// Physical description of a robot and substrate in SI units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DimensionalSpec {
    /// kg
    pub body_mass: f64,
    /// kg
    pub foot_mass: f64,
    /// Ground reaction force per unit foot depth, N/m.
    pub ground_stiffness: f64,
    /// Compression-mode leg stiffness, N/m.
    pub leg_stiffness_c: f64,
    /// m
    pub unloaded_leg_length: f64,
    /// m/s^2
    pub gravity: f64,
}

/// Characteristic units built from total mass and ground stiffness.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CharacteristicScales {
    /// kg
    pub mass: f64,
    /// m
    pub length: f64,
    /// s
    pub time: f64,
    /// J
    pub energy: f64,
}

/// The dimensionless quantities that follow from a [`DimensionalSpec`] alone.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DimensionlessDesign {
    pub kappa_c: f64,
    pub mu: f64,
    pub lambda_c: f64,
}

pub fn nondimensionalize(spec: &DimensionalSpec) -> Result<(DimensionlessDesign, CharacteristicScales)> {
    let positive = |name: &'static str, v: f64| {
        check(name, v.is_finite() && v > 0.0, || {
            format!("must be finite and > 0, got {v}")
        })
    };
    positive("body_mass", spec.body_mass)?;
    positive("ground_stiffness", spec.ground_stiffness)?;
    positive("leg_stiffness_c", spec.leg_stiffness_c)?;
    positive("unloaded_leg_length", spec.unloaded_leg_length)?;
    positive("gravity", spec.gravity)?;
    check("foot_mass", spec.foot_mass.is_finite() && spec.foot_mass >= 0.0, || {
        format!("must be finite and >= 0, got {}", spec.foot_mass)
    })?;

    let mass = spec.body_mass + spec.foot_mass;
    let length = mass * spec.gravity / spec.ground_stiffness;
    let time = (mass / spec.ground_stiffness).sqrt();
    let scales = CharacteristicScales {
        mass,
        length,
        time,
        energy: mass * spec.gravity * length,
    };
    let design = DimensionlessDesign {
        kappa_c: spec.leg_stiffness_c / spec.ground_stiffness,
        mu: spec.foot_mass / spec.body_mass,
        lambda_c: spec.unloaded_leg_length / length,
    };
    Ok((design, scales))
}

/// Inverse of [`nondimensionalize`].
pub fn dimensionalize(design: &DimensionlessDesign, scales: &CharacteristicScales) -> DimensionalSpec {
    let ground_stiffness = scales.mass / (scales.time * scales.time);
    let body_mass = scales.mass / (1.0 + design.mu);
    DimensionalSpec {
        body_mass,
        foot_mass: design.mu * body_mass,
        ground_stiffness,
        leg_stiffness_c: design.kappa_c * ground_stiffness,
        unloaded_leg_length: design.lambda_c * scales.length,
        gravity: scales.length / (scales.time * scales.time),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn actuator_force_examples() {
        let lc = 35.0;
        let unloaded = LegSpring::new(0.3, lc, SpringMode::Compression).unwrap();
        assert_eq!(actuator_force(&HopperState::new(lc, 0.0, 0.0, 0.0), &unloaded), 0.0);

        let spring = LegSpring::new(0.1, lc, SpringMode::Compression).unwrap();
        let s = HopperState::new(lc - 20.0 - 2.0, -2.0, 0.0, 0.0);
        assert!(close(actuator_force(&s, &spring), 2.0, 1e-14));

        let spring = LegSpring::new(0.5, lc, SpringMode::Compression).unwrap();
        let s = HopperState::new(lc + 1.0, 0.0, 0.0, 0.0);
        assert!(close(actuator_force(&s, &spring), -0.5, 1e-14));
    }

    #[test]
    fn ground_force_cases() {
        assert_eq!(ground_force(&HopperState::new(5.0, 1.0, 0.0, 0.0), 3.0, 0.1), 0.0);
        assert_eq!(ground_force(&HopperState::new(5.0, -2.0, 0.0, 0.5), 3.0, 0.1), 0.0);
        assert_eq!(ground_force(&HopperState::new(5.0, -2.0, 0.0, -0.5), 9.0, 0.1), 2.0);
        assert_eq!(ground_force(&HopperState::new(5.0, -2.0, 0.0, 0.0), 1.5, 0.0), 1.5);
        let pinned = ground_force(&HopperState::new(5.0, -2.0, 0.0, 0.0), 1.5, 1.0);
        assert!(close(pinned, 2.0, 1e-15));
    }

    #[test]
    fn com_kinetic_energy_examples() {
        for mu in [0.0, 0.1, 3.0] {
            let s = HopperState::new(0.0, 0.0, 1.7, 1.7);
            assert!(close(com_kinetic_energy(&s, mu), 0.5 * 1.7 * 1.7, 1e-15));
        }
        assert_eq!(com_kinetic_energy(&HopperState::new(0.0, 0.0, 1.0, 0.0), 0.0), 0.5);
        assert_eq!(com_kinetic_energy(&HopperState::new(0.0, 0.0, 0.0, 1.0), 1.0), 0.125);
    }

    #[test]
    fn spring_update_hand_inversion() {
        let params = ModelParams::new(10.0, 1.0, 0.1, 0.0).unwrap();
        let xi_f = -2.0;
        let xi_b = params.lambda_c - 20.0 + xi_f;
        let s = HopperState::new(xi_b, xi_f, 0.0, 0.0);
        let ext = spring_update(&s, &params.compression_spring(), &params).unwrap();
        assert!(close(ext.stiffness, 4.0 / 60.0, 1e-14));
        assert!(close(ext.unloaded_length, 30.0 + xi_b - xi_f, 1e-14));
        assert_eq!(ext.mode, SpringMode::Extension);
        assert!(close(
            injected_energy(&s, &params.compression_spring(), &ext),
            10.0,
            1e-12
        ));
        assert!(close(force_ratio(&s, &ext, 0.0), 1.0, 1e-12));
    }

    #[test]
    fn spring_update_identity_injection() {
        // eps_inj = 0 and a force ratio matching the compression spring force.
        let kappa = 0.3;
        let (xi_f, delta) = (-2.5, 7.0);
        let params = ModelParams::new(0.0, kappa * delta / -xi_f, kappa, 0.0).unwrap();
        let s = HopperState::new(params.lambda_c - delta + xi_f, xi_f, 0.0, 0.0);
        let ext = spring_update(&s, &params.compression_spring(), &params).unwrap();
        assert!(close(ext.stiffness, kappa, 1e-14));
        assert!(close(ext.unloaded_length, params.lambda_c, 1e-14));
    }

    #[test]
    fn spring_update_rejects_non_positive_force() {
        let params = ModelParams::new(5.0, 0.01, 0.1, 1.0).unwrap();
        let s = HopperState::new(30.0, -1.0, 0.0, 0.0);
        assert!(matches!(
            spring_update(&s, &params.compression_spring(), &params),
            Err(Error::NoValidSpring { .. })
        ));
        let at_surface = HopperState::new(30.0, 0.0, 0.0, 0.0);
        let params = ModelParams::new(5.0, 2.0, 0.1, 0.0).unwrap();
        assert!(spring_update(&at_surface, &params.compression_spring(), &params).is_err());
    }

    #[test]
    fn liftoff_reset_massless_is_lossless() {
        let params = ModelParams::new(10.0, 1.0, 0.1, 0.0).unwrap();
        let ext = LegSpring::new(0.7, 36.0, SpringMode::Extension).unwrap();
        let s = HopperState::new(33.0, -3.0, 1.5, -0.2);
        let (post, loss) = liftoff_reset(&s, &params, &ext);
        assert_eq!(loss, 0.0);
        assert_eq!(post.v_b, 1.5);
        assert_eq!(post.v_f, 1.5);
        assert_eq!(post.xi_b, 33.0);
        assert_eq!(post.xi_b - post.xi_f, params.lambda_c);
    }

    #[test]
    fn liftoff_reset_hand_value() {
        let params = ModelParams::new(10.0, 1.0, 0.1, 1.0).unwrap();
        let ext = LegSpring::new(1.0, 35.5, SpringMode::Extension).unwrap();
        let s = HopperState::new(33.0, -3.0, 2.0, 0.0);
        let (post, loss) = liftoff_reset(&s, &params, &ext);
        assert!(close(loss, 0.625, 1e-15));
        assert_eq!(post.v_b, 1.0);
        assert_eq!(post.v_f, 1.0);
        assert!(close(post.com_position(1.0), s.com_position(1.0), 1e-15));
        assert!(close(post.xi_b - post.xi_f, params.lambda_c, 1e-14));
    }

    #[test]
    fn nondimensionalize_experimental_robot() {
        let spec = DimensionalSpec {
            body_mass: 2.5,
            foot_mass: 0.5,
            ground_stiffness: 4800.0,
            leg_stiffness_c: 1296.0,
            unloaded_leg_length: 0.2,
            gravity: 9.81,
        };
        let (design, scales) = nondimensionalize(&spec).unwrap();
        assert!(close(design.mu, 0.2, 1e-15));
        assert!(close(design.kappa_c, 0.27, 1e-15));
        assert!((scales.length - 0.006131).abs() < 5e-7);
        assert!((scales.energy - 0.1805).abs() < 5e-4);
        assert_eq!(scales.mass, 3.0);

        let back = dimensionalize(&design, &scales);
        for (a, b) in [
            (back.body_mass, spec.body_mass),
            (back.foot_mass, spec.foot_mass),
            (back.ground_stiffness, spec.ground_stiffness),
            (back.leg_stiffness_c, spec.leg_stiffness_c),
            (back.unloaded_leg_length, spec.unloaded_leg_length),
            (back.gravity, spec.gravity),
        ] {
            assert!((a - b).abs() <= 1e-12 * b.abs());
        }
    }

    #[test]
    fn nondimensionalize_massless_foot_and_errors() {
        let mut spec = DimensionalSpec {
            body_mass: 1.0,
            foot_mass: 0.0,
            ground_stiffness: 100.0,
            leg_stiffness_c: 10.0,
            unloaded_leg_length: 0.3,
            gravity: 9.81,
        };
        assert_eq!(nondimensionalize(&spec).unwrap().0.mu, 0.0);
        spec.ground_stiffness = 0.0;
        assert!(nondimensionalize(&spec).is_err());
        spec.ground_stiffness = 100.0;
        spec.body_mass = -1.0;
        assert!(nondimensionalize(&spec).is_err());
    }

    #[test]
    fn params_validation() {
        assert!(ModelParams::new(-1.0, 1.0, 0.1, 0.0).is_err());
        assert!(ModelParams::new(1.0, 0.0, 0.1, 0.0).is_err());
        assert!(ModelParams::new(1.0, 1.0, 0.0, 0.0).is_err());
        assert!(ModelParams::new(1.0, 1.0, 0.1, -0.1).is_err());
        assert!(ModelParams::new(1.0, 1.0, 0.1, 0.1)
            .unwrap()
            .with_lambda_c(0.0)
            .is_err());
        let p = ModelParams::new(1.0, 0.4, 0.1, 0.0).unwrap();
        assert_eq!(p.phi_eff(), 1.0);
    }
}
