//! Event-driven simulation of the five-domain hybrid hopper.
//!
//! Each domain is integrated with [`Dopri5`]; switching surfaces are found on
//! the dense output by sampling and bisection, and the resets of the
//! controller (spring update at compression-extension, leg reset at liftoff)
//! are applied at the located events. During flight the flight controller
//! holds the leg rigid at its compression length, so body and foot fall
//! together.

use serde::{Deserialize, Serialize};

use crate::error::{check, Error, Result};
use crate::integrate::{Dopri5, Step, Tolerances};
use crate::model::{
    actuator_force, com_kinetic_energy, liftoff_reset, spring_update, HopFailure, HopRecord, HopperState, HybridDomain,
    LegSpring, ModelParams, TransitionEvent, TransitionKind,
};
use crate::output::Table;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Event times are bracketed to this width.
    pub event_tol: f64,
    pub max_step: f64,
    pub max_events_per_hop: usize,
    pub max_hops: usize,
    /// Accepted integrator steps allowed within one hop.
    pub max_steps_per_hop: usize,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-9,
            abs_tol: 1e-11,
            event_tol: 1e-10,
            max_step: 0.5,
            max_events_per_hop: 1000,
            max_hops: 100_000,
            max_steps_per_hop: 1_000_000,
        }
    }
}

impl SimConfig {
    pub fn validated(self) -> Result<Self> {
        for (name, v) in [
            ("rel_tol", self.rel_tol),
            ("abs_tol", self.abs_tol),
            ("event_tol", self.event_tol),
            ("max_step", self.max_step),
        ] {
            check(name, v.is_finite() && v > 0.0, || {
                format!("must be finite and > 0, got {v}")
            })?;
        }
        for (name, v) in [
            ("max_events_per_hop", self.max_events_per_hop),
            ("max_hops", self.max_hops),
            ("max_steps_per_hop", self.max_steps_per_hop),
        ] {
            check(name, v >= 1, || "must be at least 1".to_string())?;
        }
        Ok(self)
    }

    fn tolerances(&self) -> Tolerances {
        Tolerances {
            rel: self.rel_tol,
            abs: self.abs_tol,
            max_step: self.max_step,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub tau: f64,
    pub state: HopperState,
    pub domain: HybridDomain,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    pub hops: Vec<HopRecord>,
}

impl Trajectory {
    /// Touchdown energy sequence: the first hop's input then every successful output.
    pub fn touchdown_energies(&self) -> Vec<f64> {
        let mut out: Vec<f64> = self.hops.first().map(|h| h.eps_td_in).into_iter().collect();
        out.extend(self.hops.iter().filter_map(|h| h.eps_td_out));
        out
    }

    pub fn samples_table(&self) -> Table {
        let mut t = Table::new("trajectory", &["tau", "xi_b", "xi_f", "v_b", "v_f", "domain"]);
        for s in &self.samples {
            t.push(vec![
                s.tau.into(),
                s.state.xi_b.into(),
                s.state.xi_f.into(),
                s.state.v_b.into(),
                s.state.v_f.into(),
                s.domain.abbreviation().into(),
            ]);
        }
        t
    }

    pub fn hops_table(&self) -> Table {
        hops_table(&self.hops)
    }
}

pub fn hops_table(hops: &[HopRecord]) -> Table {
    let mut t = Table::new(
        "hops",
        &[
            "hop",
            "eps_td_in",
            "eps_td_out",
            "eps_injected",
            "eps_ground_loss",
            "eps_lo_loss",
            "depth_ce",
            "failed",
            "failure",
            "events",
        ],
    );
    for (i, h) in hops.iter().enumerate() {
        let failure = match h.failure {
            Some(HopFailure::NoLiftoff) => "no_liftoff",
            Some(HopFailure::CraterApex) => "crater_apex",
            None => "",
        };
        let events = h
            .events
            .iter()
            .map(|e| format!("{}@{}", e.kind.abbreviation(), e.time))
            .collect::<Vec<_>>()
            .join(" ");
        t.push(vec![
            i.into(),
            h.eps_td_in.into(),
            h.eps_td_out.into(),
            h.eps_injected.into(),
            h.eps_ground_loss.into(),
            h.eps_lo_loss.into(),
            h.depth_ce.into(),
            h.failed.into(),
            failure.into(),
            events.into(),
        ]);
    }
    t
}

fn sign(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

fn rhs(domain: HybridDomain, y: &[f64; 4], spring: &LegSpring, p: &ModelParams) -> [f64; 4] {
    let [xi_b, xi_f, v_b, v_f] = *y;
    let fric = if p.phi_fric > 0.0 { p.phi_fric * sign(v_b) } else { 0.0 };
    match domain {
        HybridDomain::Flight => [v_b, v_f, -1.0 - fric, -1.0 - fric],
        _ => {
            let fa = spring.stiffness * (spring.unloaded_length - xi_b + xi_f);
            let acc_b = -1.0 + (1.0 + p.mu) * (fa - fric);
            if domain.is_yielding() {
                let acc_f = -1.0 + (1.0 + p.mu) / p.mu * (-xi_f - fa);
                [v_b, v_f, acc_b, acc_f]
            } else {
                [v_b, 0.0, acc_b, 0.0]
            }
        }
    }
}

/// Time derivative of the state within `domain`.
///
/// Static domains pin the foot. In flight the leg is held rigid, so both
/// masses share the ballistic acceleration.
pub fn domain_dynamics(
    domain: HybridDomain,
    state: &HopperState,
    spring: &LegSpring,
    params: &ModelParams,
) -> Result<[f64; 4]> {
    if domain.is_yielding() && params.mu <= 0.0 {
        return Err(Error::SingularFootMass);
    }
    Ok(rhs(domain, &state.to_array(), spring, params))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Direction {
    Rising,
    Falling,
    Either,
}

/// Switching surfaces watched by the simulator, in tie-break priority order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Watch {
    CompressionExtension,
    Reyield,
    FootStop,
    Liftoff,
    Touchdown,
    FootApex,
    FrictionReversal,
}

impl Watch {
    fn direction(self) -> Direction {
        match self {
            Watch::CompressionExtension | Watch::Reyield | Watch::FootStop => Direction::Rising,
            Watch::Liftoff | Watch::Touchdown | Watch::FootApex => Direction::Falling,
            Watch::FrictionReversal => Direction::Either,
        }
    }

    fn value(self, y: &[f64; 4], spring: &LegSpring, p: &ModelParams) -> f64 {
        let [xi_b, xi_f, v_b, v_f] = *y;
        let applied = || spring.stiffness * (spring.unloaded_length - xi_b + xi_f) + p.foot_mass();
        match self {
            Watch::CompressionExtension => v_b - v_f,
            Watch::Reyield => applied() + xi_f,
            Watch::FootStop => v_f,
            Watch::Liftoff => applied(),
            Watch::Touchdown => xi_f,
            Watch::FootApex => v_f,
            Watch::FrictionReversal => v_b,
        }
    }

    fn crossed(self, before: f64, after: f64) -> bool {
        match self.direction() {
            Direction::Rising => before < 0.0 && after >= 0.0,
            Direction::Falling => before > 0.0 && after <= 0.0,
            Direction::Either => (before < 0.0 && after >= 0.0) || (before > 0.0 && after <= 0.0),
        }
    }
}

fn watches(domain: HybridDomain, friction: bool) -> Vec<Watch> {
    let mut w = match domain {
        HybridDomain::Flight => vec![Watch::Touchdown, Watch::FootApex],
        HybridDomain::YieldingCompression => vec![Watch::CompressionExtension, Watch::FootStop],
        HybridDomain::StaticCompression => {
            vec![Watch::CompressionExtension, Watch::Reyield, Watch::Liftoff]
        }
        HybridDomain::YieldingExtension => vec![Watch::FootStop],
        HybridDomain::StaticExtension => vec![Watch::Reyield, Watch::Liftoff],
    };
    if friction && domain != HybridDomain::Flight {
        w.push(Watch::FrictionReversal);
    }
    w
}

/// First switching event inside an accepted step.
///
/// Samples each watched function at five points of the dense output, bisects
/// the first bracketing sub-interval to `event_tol` and returns the point just
/// past the surface. Events closer than `event_tol` are resolved by the
/// priority order of [`Watch`].
pub fn locate_event(
    step: &Step<4>,
    active: &[Watch],
    spring: &LegSpring,
    params: &ModelParams,
    event_tol: f64,
) -> Option<(Watch, f64, HopperState)> {
    const THETAS: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];
    let points: Vec<(f64, [f64; 4])> = THETAS
        .iter()
        .map(|&th| (step.t0 + th * step.h, step.eval_theta(th)))
        .collect();

    let mut best: Option<(Watch, f64)> = None;
    for &w in active {
        let g: Vec<f64> = points.iter().map(|(_, y)| w.value(y, spring, params)).collect();
        let Some(k) = (0..4).find(|&k| w.crossed(g[k], g[k + 1])) else {
            continue;
        };
        let (mut lo, mut hi) = (points[k].0, points[k + 1].0);
        let g_lo = g[k];
        while hi - lo > event_tol {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if w.crossed(g_lo, w.value(&step.eval(mid), spring, params)) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        best = match best {
            Some((bw, bt)) if bt <= hi - event_tol || (bt <= hi + event_tol && bw <= w) => Some((bw, bt)),
            _ => Some((w, hi)),
        };
    }
    best.map(|(w, t)| (w, t, HopperState::from_array(step.eval(t))))
}

/// Stance domain entered from a state touching or below the surface.
fn stance_domain(state: &mut HopperState, spring: &LegSpring, p: &ModelParams) -> HybridDomain {
    let compression = spring.mode == crate::model::SpringMode::Compression;
    let yielding = state.v_f < 0.0 || actuator_force(state, spring) + p.foot_mass() + state.xi_f > 0.0;
    if !yielding || state.v_f > 0.0 {
        state.v_f = 0.0;
    }
    match (yielding, compression) {
        (true, true) => HybridDomain::YieldingCompression,
        (false, true) => HybridDomain::StaticCompression,
        (true, false) => HybridDomain::YieldingExtension,
        (false, false) => HybridDomain::StaticExtension,
    }
}

/// With the foot pinned the body oscillates about the weight-balancing leg
/// force; liftoff or reyield must lie inside that oscillation.
fn pinned_oscillation_stuck(state: &HopperState, spring: &LegSpring, p: &ModelParams) -> bool {
    let m_b = p.body_mass();
    let offset = actuator_force(state, spring) - m_b;
    let amp = (offset * offset + spring.stiffness * m_b * state.v_b * state.v_b).sqrt();
    let liftoff = amp >= 1.0;
    let reyield = amp >= -state.xi_f - 1.0;
    !(liftoff || reyield)
}

struct Recorder<'a> {
    samples: Option<&'a mut Vec<Sample>>,
}

impl Recorder<'_> {
    fn push(&mut self, tau: f64, state: HopperState, domain: HybridDomain) {
        if let Some(samples) = self.samples.as_deref_mut() {
            let sample = Sample { tau, state, domain };
            match samples.last_mut() {
                Some(last) if last.tau >= tau => *last = sample,
                _ => samples.push(sample),
            }
        }
    }
}

enum Phase {
    Continue,
    Done,
}

struct Hop<'a, 'r> {
    params: &'a ModelParams,
    config: &'a SimConfig,
    spring: LegSpring,
    domain: HybridDomain,
    state: HopperState,
    t: f64,
    t_start: f64,
    min_depth: f64,
    record: HopRecord,
    rec: &'a mut Recorder<'r>,
}

impl Hop<'_, '_> {
    fn log(&mut self, kind: TransitionKind) -> Result<()> {
        self.record.events.push(TransitionEvent {
            kind,
            time: self.t - self.t_start,
        });
        if self.record.events.len() > self.config.max_events_per_hop {
            return Err(Error::EventCapExceeded {
                cap: self.config.max_events_per_hop,
            });
        }
        Ok(())
    }

    fn fail(&mut self, why: HopFailure) -> Phase {
        self.record.failed = true;
        self.record.failure = Some(why);
        self.record.eps_td_out = None;
        Phase::Done
    }

    fn enter_pinned(&mut self, domain: HybridDomain) -> Phase {
        self.domain = domain;
        if domain == HybridDomain::StaticExtension && pinned_oscillation_stuck(&self.state, &self.spring, self.params) {
            return self.fail(HopFailure::NoLiftoff);
        }
        Phase::Continue
    }

    fn liftoff(&mut self) -> Result<Phase> {
        self.log(TransitionKind::Liftoff)?;
        let depth = self.min_depth;
        self.record.eps_ground_loss = 0.5 * depth * depth;
        let (post, loss) = liftoff_reset(&self.state, self.params, &self.spring);
        self.record.eps_lo_loss += loss;
        self.state = post;
        self.spring = self.params.compression_spring();
        self.domain = HybridDomain::Flight;
        if post.xi_f < 0.0 && post.v_f <= 0.0 {
            return Ok(self.fail(HopFailure::CraterApex));
        }
        Ok(Phase::Continue)
    }

    fn compression_extension(&mut self) -> Result<Phase> {
        self.record.depth_ce = Some(self.state.xi_f);
        let compression = self.spring;
        self.spring = spring_update(&self.state, &compression, self.params)?;
        self.record.eps_injected += self.params.eps_inj;
        self.log(TransitionKind::CompressionExtension)?;
        let reyield = self.params.phi > 1.0;
        if reyield {
            self.log(TransitionKind::Reyield)?;
        }
        if self.domain == HybridDomain::YieldingCompression || reyield {
            self.domain = HybridDomain::YieldingExtension;
            Ok(Phase::Continue)
        } else {
            Ok(self.enter_pinned(HybridDomain::StaticExtension))
        }
    }

    fn transition(&mut self, watch: Watch) -> Result<Phase> {
        use HybridDomain::*;
        match watch {
            Watch::CompressionExtension => self.compression_extension(),
            Watch::FootStop => {
                self.state.v_f = 0.0;
                self.log(TransitionKind::FootStop)?;
                let pinned = if self.domain == YieldingCompression {
                    StaticCompression
                } else {
                    StaticExtension
                };
                self.domain = pinned;
                if actuator_force(&self.state, &self.spring) + self.params.foot_mass() <= 0.0 {
                    return self.liftoff();
                }
                Ok(self.enter_pinned(pinned))
            }
            Watch::Reyield => {
                self.log(TransitionKind::Reyield)?;
                self.domain = if self.domain == StaticCompression {
                    YieldingCompression
                } else {
                    YieldingExtension
                };
                Ok(Phase::Continue)
            }
            Watch::Liftoff => self.liftoff(),
            Watch::FootApex => {
                if self.state.xi_f < 0.0 {
                    Ok(self.fail(HopFailure::CraterApex))
                } else {
                    Ok(Phase::Continue)
                }
            }
            Watch::Touchdown => {
                self.state.xi_b -= self.state.xi_f;
                self.state.xi_f = 0.0;
                self.record.eps_td_out = Some(com_kinetic_energy(&self.state, self.params.mu));
                Ok(Phase::Done)
            }
            Watch::FrictionReversal => {
                if self.domain == StaticExtension && pinned_oscillation_stuck(&self.state, &self.spring, self.params) {
                    return Ok(self.fail(HopFailure::NoLiftoff));
                }
                Ok(Phase::Continue)
            }
        }
    }

    fn run(&mut self) -> Result<()> {
        let tol = self.config.tolerances();
        let friction = self.params.phi_fric > 0.0;
        let mut steps = 0usize;
        self.rec.push(self.t, self.state, self.domain);
        if self.domain == HybridDomain::StaticExtension {
            if let Phase::Done = self.enter_pinned(self.domain) {
                return Ok(());
            }
        }
        loop {
            let domain = self.domain;
            let spring = self.spring;
            let params = *self.params;
            let active = watches(domain, friction);
            let f = move |y: &[f64; 4]| rhs(domain, y, &spring, &params);
            let mut ode = Dopri5::new(&f, self.t, self.state.to_array(), tol);
            let (watch, t, state) = loop {
                steps += 1;
                if steps > self.config.max_steps_per_hop {
                    return Err(Error::Integration(format!(
                        "exceeded {} steps within one hop",
                        self.config.max_steps_per_hop
                    )));
                }
                let step = ode
                    .step(&f)
                    .ok_or_else(|| Error::Integration(format!("step size underflow at tau = {}", ode.time())))?;
                if let Some(hit) = locate_event(&step, &active, &spring, &params, self.config.event_tol) {
                    break hit;
                }
                let y = HopperState::from_array(step.y1);
                if domain.is_stance() {
                    self.min_depth = self.min_depth.min(y.xi_f);
                }
                self.rec.push(step.t1(), y, domain);
            };
            self.t = t;
            self.state = state;
            if domain.is_stance() {
                self.min_depth = self.min_depth.min(state.xi_f);
            }
            let phase = self.transition(watch)?;
            self.rec.push(self.t, self.state, self.domain);
            if let Phase::Done = phase {
                return Ok(());
            }
        }
    }
}

fn require_foot_mass(params: &ModelParams) -> Result<()> {
    if params.mu > 0.0 {
        Ok(())
    } else {
        Err(Error::SingularFootMass)
    }
}

struct HopOutcome {
    record: HopRecord,
    end: HopperState,
    t_end: f64,
}

fn run_hop(
    params: &ModelParams,
    config: &SimConfig,
    mut state: HopperState,
    t0: f64,
    touchdown: bool,
    rec: &mut Recorder<'_>,
) -> Result<HopOutcome> {
    let spring = params.compression_spring();
    let domain = stance_domain(&mut state, &spring, params);
    let mut events = Vec::new();
    if touchdown {
        events.push(TransitionEvent {
            kind: TransitionKind::Touchdown,
            time: 0.0,
        });
    }
    let record = HopRecord {
        eps_td_in: com_kinetic_energy(&state, params.mu),
        eps_td_out: None,
        eps_injected: 0.0,
        eps_ground_loss: 0.0,
        eps_lo_loss: 0.0,
        depth_ce: None,
        events,
        failed: false,
        failure: None,
    };
    let mut hop = Hop {
        params,
        config,
        spring,
        domain,
        state,
        t: t0,
        t_start: t0,
        min_depth: state.xi_f.min(0.0),
        record,
        rec,
    };
    hop.run()?;
    if hop.record.eps_ground_loss == 0.0 {
        hop.record.eps_ground_loss = 0.5 * hop.min_depth * hop.min_depth;
    }
    Ok(HopOutcome {
        record: hop.record,
        end: hop.state,
        t_end: hop.t,
    })
}

/// One touchdown-to-touchdown hop starting with COM kinetic energy `eps_td`.
pub fn simulate_hop(eps_td: f64, params: &ModelParams, config: &SimConfig) -> Result<HopRecord> {
    let params = params.validated()?;
    let config = config.validated()?;
    require_foot_mass(&params)?;
    check("eps_td", eps_td.is_finite() && eps_td >= 0.0, || {
        format!("must be finite and >= 0, got {eps_td}")
    })?;
    let v = -(2.0 * eps_td).sqrt();
    let state = HopperState::new(params.lambda_c, 0.0, v, v);
    let mut rec = Recorder { samples: None };
    Ok(run_hop(&params, &config, state, 0.0, true, &mut rec)?.record)
}

/// Chains hops from an arbitrary initial state, recording samples and per-hop ledgers.
///
/// A state above the surface (or below it with the foot rising) starts in
/// flight after the flight-controller reset; otherwise the first hop starts in
/// stance. Stops after `n_hops` hops, at the first failed hop, or at
/// `config.max_hops`.
pub fn simulate_trajectory(
    initial_state: HopperState,
    params: &ModelParams,
    config: &SimConfig,
    n_hops: usize,
) -> Result<Trajectory> {
    let params = params.validated()?;
    let config = config.validated()?;
    require_foot_mass(&params)?;
    check("initial_state", initial_state.is_finite(), || {
        "must be finite".to_string()
    })?;
    let n_hops = n_hops.min(config.max_hops);

    let mut traj = Trajectory::default();
    let mut samples = Vec::new();
    let mut rec = Recorder {
        samples: Some(&mut samples),
    };

    let mut state = initial_state;
    let mut t = 0.0;
    let mut touchdown = false;
    let in_flight = state.xi_f > 0.0 || (state.xi_f <= 0.0 && state.v_f > 0.0);
    if in_flight && n_hops > 0 {
        rec.push(t, state, HybridDomain::Flight);
        let (reset, _) = liftoff_reset(&state, &params, &params.compression_spring());
        let mut flight = Hop {
            params: &params,
            config: &config,
            spring: params.compression_spring(),
            domain: HybridDomain::Flight,
            state: reset,
            t,
            t_start: t,
            min_depth: 0.0,
            record: HopRecord {
                eps_td_in: com_kinetic_energy(&initial_state, params.mu),
                eps_td_out: None,
                eps_injected: 0.0,
                eps_ground_loss: 0.0,
                eps_lo_loss: 0.0,
                depth_ce: None,
                events: Vec::new(),
                failed: false,
                failure: None,
            },
            rec: &mut rec,
        };
        if reset.xi_f < 0.0 && reset.v_f <= 0.0 {
            flight.fail(HopFailure::CraterApex);
        } else {
            flight.run()?;
        }
        if flight.record.failed {
            let record = flight.record;
            traj.hops.push(record);
            traj.samples = samples;
            return Ok(traj);
        }
        state = flight.state;
        t = flight.t;
        touchdown = true;
    }

    for _ in 0..n_hops {
        let out = run_hop(&params, &config, state, t, touchdown, &mut rec)?;
        let failed = out.record.failed;
        traj.hops.push(out.record);
        state = out.end;
        t = out.t_end;
        touchdown = true;
        if failed {
            break;
        }
    }
    if samples.is_empty() {
        samples.push(Sample {
            tau: 0.0,
            state: initial_state,
            domain: if in_flight {
                HybridDomain::Flight
            } else {
                HybridDomain::StaticCompression
            },
        });
    }
    traj.samples = samples;
    Ok(traj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::massless;
    use crate::model::SpringMode;

    fn params(eps_inj: f64, phi: f64, kappa_c: f64, mu: f64) -> ModelParams {
        ModelParams::new(eps_inj, phi, kappa_c, mu).unwrap()
    }

    #[test]
    fn dynamics_examples() {
        let p = params(10.0, 1.0, 0.1, 0.1);
        let s = HopperState::new(p.lambda_c, 0.0, -1.0, -1.0);
        let d = domain_dynamics(HybridDomain::Flight, &s, &p.compression_spring(), &p).unwrap();
        assert_eq!(d, [-1.0, -1.0, -1.0, -1.0]);

        let p = params(10.0, 1.0, 1.0, 1.0);
        let spring = LegSpring::new(1.0, 35.0, SpringMode::Compression).unwrap();
        let s = HopperState::new(35.0 - 2.0 - 2.0, -2.0, -1.0, -0.5);
        let d = domain_dynamics(HybridDomain::YieldingCompression, &s, &spring, &p).unwrap();
        assert!((d[2] - 3.0).abs() < 1e-14);
        assert!((d[3] + 1.0).abs() < 1e-14);

        let d = domain_dynamics(HybridDomain::StaticCompression, &s, &spring, &p).unwrap();
        assert_eq!(d[1], 0.0);
        assert_eq!(d[3], 0.0);

        let p0 = params(10.0, 1.0, 1.0, 0.0);
        assert!(domain_dynamics(HybridDomain::YieldingExtension, &s, &spring, &p0).is_err());
    }

    #[test]
    fn hop_matches_massless_map() {
        let p = params(10.0, 1.0, 0.1, 1e-3);
        let r = simulate_hop(20.0, &p, &SimConfig::default()).unwrap();
        let want = massless::map_eval(20.0, &p);
        let got = r.eps_td_out.unwrap();
        assert!((got - want).abs() < 0.01 * want, "{got} vs {want}");
        assert!(r.ledger_residual().unwrap().abs() < 1e-6 * 20.0);
    }

    #[test]
    fn zero_energy_hop_fails() {
        let p = params(0.0, 1.0, 0.1, 0.1);
        let r = simulate_hop(0.0, &p, &SimConfig::default()).unwrap();
        assert!(r.failed);
        assert!(r.eps_td_out.is_none());
    }

    #[test]
    fn reyield_logged_at_ce() {
        let p = params(20.0, 2.0, 0.1, 0.05);
        let r = simulate_hop(15.0, &p, &SimConfig::default()).unwrap();
        let ce = r
            .events
            .iter()
            .position(|e| e.kind == TransitionKind::CompressionExtension)
            .unwrap();
        assert_eq!(r.events[ce + 1].kind, TransitionKind::Reyield);
        assert_eq!(r.events[ce + 1].time, r.events[ce].time);
    }

    #[test]
    fn trajectory_samples_increase() {
        let p = params(10.0, 1.25, 0.1, 0.1);
        let traj = simulate_trajectory(HopperState::at_rest(p.lambda_c), &p, &SimConfig::default(), 3).unwrap();
        assert_eq!(traj.hops.len(), 3);
        assert!(traj.samples.windows(2).all(|w| w[1].tau > w[0].tau));
        assert!(traj.samples.iter().all(|s| s.state.is_finite()));
    }

    #[test]
    fn flight_start_lands() {
        let p = params(10.0, 1.0, 0.1, 0.1);
        let start = HopperState::new(p.lambda_c + 3.0, 3.0, 0.0, 0.0);
        let traj = simulate_trajectory(start, &p, &SimConfig::default(), 1).unwrap();
        assert_eq!(traj.hops.len(), 1);
        assert!((traj.hops[0].eps_td_in - 3.0).abs() < 1e-8);
        assert_eq!(traj.hops[0].events[0].kind, TransitionKind::Touchdown);
    }

    #[test]
    fn deterministic() {
        let p = params(12.0, 2.0, 0.25, 0.02);
        let a = simulate_hop(3.0, &p, &SimConfig::default()).unwrap();
        let b = simulate_hop(3.0, &p, &SimConfig::default()).unwrap();
        assert_eq!(a, b);
    }
}
