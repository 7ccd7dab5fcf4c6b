//! Lagrangian dynamics of a planar serial chain in absolute angles.
//!
//! With link `i` at absolute angle `theta_i`, the center of mass of link `i`
//! sits at `sum_{j<i} L_j u(theta_j) + d_i u(theta_i)` with
//! `u(t) = (cos t, sin t)`. Gravity acts along -y and the potential datum is
//! `y = 0`. The equations of motion take the form
//!
//! ```text
//! tau = M(theta) theta_ddot + c(theta, theta_dot) + G(theta)
//! M_jk = B_jk cos(theta_j - theta_k)
//! c_j  = sum_k B_jk sin(theta_j - theta_k) theta_dot_k^2
//! G_j  = (m_j d_j + m_out(j) L_j) g cos(theta_j)
//! ```
//!
//! where `m_out(j)` is the total mass outboard of link `j`,
//! `B_jj = I_j + m_j d_j^2 + m_out(j) L_j^2` and, for `j < k`,
//! `B_jk = B_kj = L_j (m_k d_k + m_out(k) L_k)`.
//!
//! Energies are evaluated from link COM velocities directly and never go
//! through the mass matrix, so they can serve as an independent reference
//! (see [`crate::verify`]).

use alloc::vec;
use alloc::vec::Vec;

use libm::{cos, sin};

use crate::error::{Error, Result};
use crate::kinematics::PlanarPoint;
use crate::linalg::SquareMatrix;
use crate::model::{JointState, LinkChain, PhasePoint};

/// Default integration step, s.
pub const DEFAULT_DT: f64 = 1e-4;

/// Mass matrix, velocity-product and gravity torques at one state.
#[derive(Debug, Clone, PartialEq)]
pub struct EomTerms {
    pub mass_matrix: SquareMatrix,
    pub coriolis: Vec<f64>,
    pub gravity: Vec<f64>,
}

impl EomTerms {
    /// `M a + c + G`.
    pub fn torque(&self, theta_ddot: &[f64]) -> Vec<f64> {
        let mut tau = self.mass_matrix.mul_vec(theta_ddot);
        for (t, (c, g)) in tau.iter_mut().zip(self.coriolis.iter().zip(&self.gravity)) {
            *t += c + g;
        }
        tau
    }
}

/// Link center-of-mass positions.
pub fn com_positions(chain: &LinkChain, theta: &[f64]) -> Result<Vec<PlanarPoint>> {
    chain.expect_len(theta.len())?;
    let mut joint = PlanarPoint::default();
    Ok((0..chain.n_links())
        .map(|i| {
            let (s, c) = (sin(theta[i]), cos(theta[i]));
            let com = PlanarPoint {
                x: joint.x + chain.com_offsets()[i] * c,
                y: joint.y + chain.com_offsets()[i] * s,
            };
            joint.x += chain.lengths()[i] * c;
            joint.y += chain.lengths()[i] * s;
            com
        })
        .collect())
}

/// Link center-of-mass velocities.
pub fn com_velocities(chain: &LinkChain, theta: &[f64], theta_dot: &[f64]) -> Result<Vec<PlanarPoint>> {
    chain.expect_len(theta.len())?;
    chain.expect_len(theta_dot.len())?;
    let mut joint = PlanarPoint::default();
    Ok((0..chain.n_links())
        .map(|i| {
            // tangent (-sin, cos) scaled by the angular rate
            let (s, c) = (sin(theta[i]), cos(theta[i]));
            let w = theta_dot[i];
            let v = PlanarPoint {
                x: joint.x - chain.com_offsets()[i] * w * s,
                y: joint.y + chain.com_offsets()[i] * w * c,
            };
            joint.x -= chain.lengths()[i] * w * s;
            joint.y += chain.lengths()[i] * w * c;
            v
        })
        .collect())
}

/// Kinetic energy from angles and rates, J.
pub fn kinetic_energy_at(chain: &LinkChain, theta: &[f64], theta_dot: &[f64]) -> Result<f64> {
    let v = com_velocities(chain, theta, theta_dot)?;
    Ok((0..chain.n_links())
        .map(|i| {
            let vv = v[i].x * v[i].x + v[i].y * v[i].y;
            0.5 * chain.masses()[i] * vv + 0.5 * chain.inertias()[i] * theta_dot[i] * theta_dot[i]
        })
        .sum())
}

pub fn kinetic_energy(chain: &LinkChain, state: &JointState) -> Result<f64> {
    kinetic_energy_at(chain, state.theta(), state.theta_dot())
}

/// Gravitational potential energy, J, with datum `y = 0`.
pub fn potential_energy(chain: &LinkChain, theta: &[f64], gravity: f64) -> Result<f64> {
    let coms = com_positions(chain, theta)?;
    Ok(gravity * coms.iter().zip(chain.masses()).map(|(p, m)| m * p.y).sum::<f64>())
}

/// Mass outboard of each link: `out[i] = sum_{k>i} m_k`.
fn outboard_masses(chain: &LinkChain) -> Vec<f64> {
    let m = chain.masses();
    let mut out = vec![0.0; m.len()];
    for i in (0..m.len().saturating_sub(1)).rev() {
        out[i] = out[i + 1] + m[i + 1];
    }
    out
}

/// First moment of link `k` and everything outboard about joint `k`,
/// along link `k`: `m_k d_k + m_out(k) L_k`.
fn first_moments(chain: &LinkChain, outboard: &[f64]) -> Vec<f64> {
    (0..chain.n_links())
        .map(|k| chain.masses()[k] * chain.com_offsets()[k] + outboard[k] * chain.lengths()[k])
        .collect()
}

/// Configuration-independent coefficients `B_jk` of the mass matrix.
fn coupling_coefficients(chain: &LinkChain) -> SquareMatrix {
    let n = chain.n_links();
    let outboard = outboard_masses(chain);
    let moments = first_moments(chain, &outboard);
    let (l, m, d, inertia) = (chain.lengths(), chain.masses(), chain.com_offsets(), chain.inertias());
    let mut b = SquareMatrix::zeros(n);
    for j in 0..n {
        b.set(j, j, inertia[j] + m[j] * d[j] * d[j] + outboard[j] * l[j] * l[j]);
        for (k, moment) in moments.iter().enumerate().skip(j + 1) {
            let v = l[j] * moment;
            b.set(j, k, v);
            b.set(k, j, v);
        }
    }
    b
}

pub fn mass_matrix(chain: &LinkChain, theta: &[f64]) -> Result<SquareMatrix> {
    chain.expect_len(theta.len())?;
    let mut m = coupling_coefficients(chain);
    let n = chain.n_links();
    for j in 0..n {
        for k in (j + 1)..n {
            let v = m.get(j, k) * cos(theta[j] - theta[k]);
            m.set(j, k, v);
            m.set(k, j, v);
        }
    }
    Ok(m)
}

pub fn coriolis_vector(chain: &LinkChain, theta: &[f64], theta_dot: &[f64]) -> Result<Vec<f64>> {
    chain.expect_len(theta.len())?;
    chain.expect_len(theta_dot.len())?;
    let b = coupling_coefficients(chain);
    let n = chain.n_links();
    Ok((0..n)
        .map(|j| {
            (0..n)
                .filter(|&k| k != j)
                .map(|k| b.get(j, k) * sin(theta[j] - theta[k]) * theta_dot[k] * theta_dot[k])
                .sum()
        })
        .collect())
}

pub fn gravity_vector(chain: &LinkChain, theta: &[f64], gravity: f64) -> Result<Vec<f64>> {
    chain.expect_len(theta.len())?;
    let moments = first_moments(chain, &outboard_masses(chain));
    Ok(moments
        .iter()
        .zip(theta)
        .map(|(mo, t)| mo * gravity * cos(*t))
        .collect())
}

pub fn eom_terms(chain: &LinkChain, state: &JointState, gravity: f64) -> Result<EomTerms> {
    chain.expect_len(state.n())?;
    Ok(EomTerms {
        mass_matrix: mass_matrix(chain, state.theta())?,
        coriolis: coriolis_vector(chain, state.theta(), state.theta_dot())?,
        gravity: gravity_vector(chain, state.theta(), gravity)?,
    })
}

/// Joint torques that realize the state's accelerations.
pub fn inverse_dynamics(chain: &LinkChain, state: &JointState, gravity: f64) -> Result<Vec<f64>> {
    Ok(eom_terms(chain, state, gravity)?.torque(state.theta_ddot()))
}

/// Accelerations `M^-1 (tau - c - G)` produced by `tau` at `phase`.
pub fn forward_acceleration(chain: &LinkChain, phase: &PhasePoint, tau: &[f64], gravity: f64) -> Result<Vec<f64>> {
    chain.expect_len(phase.theta.len())?;
    chain.expect_len(tau.len())?;
    let m = mass_matrix(chain, &phase.theta)?;
    let c = coriolis_vector(chain, &phase.theta, &phase.theta_dot)?;
    let g = gravity_vector(chain, &phase.theta, gravity)?;
    let rhs: Vec<f64> = (0..tau.len()).map(|i| tau[i] - c[i] - g[i]).collect();
    Ok(m.cholesky()?.solve(&rhs))
}

/// A joint-torque law evaluated at time `t` and state `phase`.
pub trait TorqueProgram {
    fn torque(&self, t: f64, phase: &PhasePoint) -> Vec<f64>;
}

impl<F> TorqueProgram for F
where
    F: Fn(f64, &PhasePoint) -> Vec<f64>,
{
    fn torque(&self, t: f64, phase: &PhasePoint) -> Vec<f64> {
        self(t, phase)
    }
}

/// No actuation.
#[derive(Debug, Clone, Copy, Default)]
pub struct ZeroTorque;

impl TorqueProgram for ZeroTorque {
    fn torque(&self, _t: f64, phase: &PhasePoint) -> Vec<f64> {
        vec![0.0; phase.theta.len()]
    }
}

#[derive(Debug, Clone)]
pub struct ConstantTorque(pub Vec<f64>);

impl TorqueProgram for ConstantTorque {
    fn torque(&self, _t: f64, _phase: &PhasePoint) -> Vec<f64> {
        self.0.clone()
    }
}

/// Cancels gravity at the current configuration: `tau = G(theta)`.
#[derive(Debug, Clone)]
pub struct GravityCompensation<'a> {
    pub chain: &'a LinkChain,
    pub gravity: f64,
}

impl TorqueProgram for GravityCompensation<'_> {
    fn torque(&self, _t: f64, phase: &PhasePoint) -> Vec<f64> {
        // theta length was validated when the simulation started
        gravity_vector(self.chain, &phase.theta, self.gravity).unwrap_or_else(|_| vec![f64::NAN; phase.theta.len()])
    }
}

/// Joint-space PD regulator `kp (target - theta) - kd theta_dot`.
#[derive(Debug, Clone)]
pub struct PdHold {
    pub target: Vec<f64>,
    pub kp: f64,
    pub kd: f64,
}

impl PdHold {
    /// N·m/rad
    pub const DEFAULT_KP: f64 = 1.0;
    /// N·m·s/rad
    pub const DEFAULT_KD: f64 = 0.1;

    pub fn new(target: Vec<f64>) -> Self {
        Self {
            target,
            kp: Self::DEFAULT_KP,
            kd: Self::DEFAULT_KD,
        }
    }
}

impl TorqueProgram for PdHold {
    fn torque(&self, _t: f64, phase: &PhasePoint) -> Vec<f64> {
        self.target
            .iter()
            .zip(phase.theta.iter().zip(&phase.theta_dot))
            .map(|(target, (theta, omega))| self.kp * (target - theta) - self.kd * omega)
            .collect()
    }
}

fn derivative(
    chain: &LinkChain,
    phase: &PhasePoint,
    t: f64,
    program: &dyn TorqueProgram,
    gravity: f64,
) -> Result<PhasePoint> {
    let tau = program.torque(t, phase);
    let accel = forward_acceleration(chain, phase, &tau, gravity)?;
    Ok(PhasePoint {
        theta: phase.theta_dot.clone(),
        theta_dot: accel,
    })
}

fn offset(base: &PhasePoint, slope: &PhasePoint, h: f64) -> PhasePoint {
    let add = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x + h * y).collect();
    PhasePoint {
        theta: add(&base.theta, &slope.theta),
        theta_dot: add(&base.theta_dot, &slope.theta_dot),
    }
}

/// One classical RK4 step, re-evaluating the torque program at every stage.
pub fn rk4_step(
    chain: &LinkChain,
    phase: &PhasePoint,
    t: f64,
    program: &dyn TorqueProgram,
    gravity: f64,
    dt: f64,
) -> Result<PhasePoint> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::Domain {
            argument: "dt",
            requirement: "must be finite and > 0",
        });
    }
    chain.expect_len(phase.theta.len())?;
    chain.expect_len(phase.theta_dot.len())?;
    let stage = |p: &PhasePoint, time: f64| match derivative(chain, p, time, program, gravity) {
        Err(Error::SingularMassMatrix) if !p.is_finite() => Err(Error::NonFiniteState),
        other => other,
    };
    let half = 0.5 * dt;
    let k1 = stage(phase, t)?;
    let k2 = stage(&offset(phase, &k1, half), t + half)?;
    let k3 = stage(&offset(phase, &k2, half), t + half)?;
    let k4 = stage(&offset(phase, &k3, dt), t + dt)?;
    let combine = |x: &[f64], a: &[f64], b: &[f64], c: &[f64], d: &[f64]| -> Vec<f64> {
        (0..x.len())
            .map(|i| x[i] + dt / 6.0 * (a[i] + 2.0 * b[i] + 2.0 * c[i] + d[i]))
            .collect()
    };
    let next = PhasePoint {
        theta: combine(&phase.theta, &k1.theta, &k2.theta, &k3.theta, &k4.theta),
        theta_dot: combine(&phase.theta_dot, &k1.theta_dot, &k2.theta_dot, &k3.theta_dot, &k4.theta_dot),
    };
    if next.is_finite() {
        Ok(next)
    } else {
        Err(Error::NonFiniteState)
    }
}

/// One RK4 step under a constant joint torque `tau`.
pub fn forward_dynamics_step(
    chain: &LinkChain,
    phase: &PhasePoint,
    tau: &[f64],
    gravity: f64,
    dt: f64,
) -> Result<PhasePoint> {
    chain.expect_len(tau.len())?;
    rk4_step(chain, phase, 0.0, &ConstantTorque(tau.to_vec()), gravity, dt)
}

/// Kinetic, potential and total energy, J.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Energy {
    pub kinetic: f64,
    pub potential: f64,
    pub total: f64,
}

/// Sampled simulation record. Sample 0 is the initial state.
#[derive(Debug, Clone, PartialEq)]
pub struct DynamicsTrajectory {
    pub time: Vec<f64>,
    pub states: Vec<JointState>,
    pub energies: Vec<Energy>,
    pub applied_torques: Vec<Vec<f64>>,
}

impl DynamicsTrajectory {
    pub fn len(&self) -> usize {
        self.time.len()
    }

    pub fn is_empty(&self) -> bool {
        self.time.is_empty()
    }

    /// Largest deviation of total energy from its initial value, relative to
    /// `max(|E_0|, max_t K)`. Falls back to the absolute deviation when that
    /// scale is zero (a chain that never moves from a zero-energy state).
    pub fn energy_drift(&self) -> f64 {
        let Some(first) = self.energies.first() else {
            return 0.0;
        };
        let worst = self
            .energies
            .iter()
            .fold(0.0f64, |w, e| w.max((e.total - first.total).abs()));
        let scale = self
            .energies
            .iter()
            .fold(first.total.abs(), |s, e| s.max(e.kinetic));
        if scale > 0.0 {
            worst / scale
        } else {
            worst
        }
    }

    /// Actuator work `integral tau . theta_dot dt` by the trapezoidal rule, J.
    pub fn work_done(&self) -> f64 {
        let power: Vec<f64> = self
            .states
            .iter()
            .zip(&self.applied_torques)
            .map(|(s, tau)| s.theta_dot().iter().zip(tau).map(|(w, t)| w * t).sum())
            .collect();
        (1..power.len())
            .map(|k| 0.5 * (power[k] + power[k - 1]) * (self.time[k] - self.time[k - 1]))
            .sum()
    }
}

/// Fixed-step RK4 rollout from `initial` for `duration` seconds.
///
/// The number of steps is `duration / dt` rounded up (a ratio within 1e-9 of
/// an integer counts as that integer); every step uses `dt`.
pub fn simulate(
    chain: &LinkChain,
    initial: &PhasePoint,
    program: &dyn TorqueProgram,
    gravity: f64,
    duration: f64,
    dt: f64,
) -> Result<DynamicsTrajectory> {
    if !(duration.is_finite() && duration > 0.0) {
        return Err(Error::Domain {
            argument: "duration",
            requirement: "must be finite and > 0",
        });
    }
    if !(dt.is_finite() && dt > 0.0 && dt <= duration) {
        return Err(Error::Domain {
            argument: "dt",
            requirement: "must be finite, > 0 and <= duration",
        });
    }
    chain.expect_len(initial.theta.len())?;
    chain.expect_len(initial.theta_dot.len())?;
    if !initial.is_finite() {
        return Err(Error::Invalid {
            field: "initial",
            index: None,
            requirement: "must be finite",
        });
    }
    let ratio = duration / dt;
    let steps = if (ratio - libm::round(ratio)).abs() <= 1e-9 * ratio {
        libm::round(ratio) as usize
    } else {
        libm::ceil(ratio) as usize
    };

    let mut traj = DynamicsTrajectory {
        time: Vec::with_capacity(steps + 1),
        states: Vec::with_capacity(steps + 1),
        energies: Vec::with_capacity(steps + 1),
        applied_torques: Vec::with_capacity(steps + 1),
    };
    let mut phase = initial.clone();
    for k in 0..=steps {
        let t = k as f64 * dt;
        let diverged = || Error::Diverged { step: k, time: t };
        let tau = program.torque(t, &phase);
        chain.expect_len(tau.len())?;
        let accel = forward_acceleration(chain, &phase, &tau, gravity).map_err(|_| diverged())?;
        let kinetic = kinetic_energy_at(chain, &phase.theta, &phase.theta_dot)?;
        let potential = potential_energy(chain, &phase.theta, gravity)?;
        let state = JointState::new(phase.theta.clone(), phase.theta_dot.clone(), accel).map_err(|_| diverged())?;
        traj.time.push(t);
        traj.states.push(state);
        traj.energies.push(Energy {
            kinetic,
            potential,
            total: kinetic + potential,
        });
        traj.applied_torques.push(tau);
        if k < steps {
            phase = match rk4_step(chain, &phase, t, program, gravity, dt) {
                Ok(next) => next,
                Err(Error::NonFiniteState | Error::SingularMassMatrix) => {
                    return Err(Error::Diverged {
                        step: k + 1,
                        time: (k + 1) as f64 * dt,
                    })
                }
                Err(e) => return Err(e),
            };
        }
    }
    Ok(traj)
}
