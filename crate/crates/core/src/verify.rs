//! Numerical oracles for the closed-form dynamics.
//!
//! [`euler_lagrange_fd`] rebuilds joint torques from nothing but the energy
//! functions, `tau_i = d/dt(dL/d theta_dot_i) - dL/d theta_i`, using central
//! differences. It never touches the mass matrix, Coriolis or gravity code,
//! so agreement with [`inverse_dynamics`](crate::dynamics::inverse_dynamics)
//! is a genuine cross-check.

use alloc::vec::Vec;
use core::f64::consts::PI;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dynamics::{self, DynamicsTrajectory};
use crate::error::{Error, Result};
use crate::model::{JointState, LinkChain};

/// Default step for angle derivatives and the total time derivative.
pub const DEFAULT_STEP: f64 = 1e-6;

/// Step for derivatives with respect to joint rates, rad/s. Kinetic energy
/// is a quadratic form in the rates, so a central difference in the rates
/// has no truncation error and a wide step only reduces round-off.
pub const RATE_STEP: f64 = 1.0;

/// Sampling box of [`cross_check`].
pub const SAMPLE_THETA: (f64, f64) = (-PI, PI);
pub const SAMPLE_THETA_DOT: (f64, f64) = (-5.0, 5.0);
pub const SAMPLE_THETA_DDOT: (f64, f64) = (-20.0, 20.0);

/// Acceptance threshold for closed form vs. finite differences.
pub const CROSS_CHECK_TOLERANCE: f64 = 1e-6;

/// `K - P`, J.
pub fn lagrangian(chain: &LinkChain, state: &JointState, gravity: f64) -> Result<f64> {
    lagrangian_at(chain, state.theta(), state.theta_dot(), gravity)
}

fn lagrangian_at(chain: &LinkChain, theta: &[f64], theta_dot: &[f64], gravity: f64) -> Result<f64> {
    Ok(dynamics::kinetic_energy_at(chain, theta, theta_dot)? - dynamics::potential_energy(chain, theta, gravity)?)
}

/// Generalized momenta `dL/d theta_dot_i` by central differences.
fn momenta(chain: &LinkChain, theta: &[f64], theta_dot: &[f64], gravity: f64) -> Result<Vec<f64>> {
    let mut w = theta_dot.to_vec();
    (0..w.len())
        .map(|i| {
            let base = w[i];
            w[i] = base + RATE_STEP;
            let ahead = lagrangian_at(chain, theta, &w, gravity)?;
            w[i] = base - RATE_STEP;
            let behind = lagrangian_at(chain, theta, &w, gravity)?;
            w[i] = base;
            Ok((ahead - behind) / (2.0 * RATE_STEP))
        })
        .collect()
}

/// Euler-Lagrange torques evaluated entirely by finite differences of the
/// Lagrangian. The time derivative of the momenta is taken along the state's
/// own motion `(theta_dot, theta_ddot)` with step `h`.
pub fn euler_lagrange_fd(chain: &LinkChain, state: &JointState, gravity: f64, h: f64) -> Result<Vec<f64>> {
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::Domain {
            argument: "h",
            requirement: "must be finite and > 0",
        });
    }
    chain.expect_len(state.n())?;
    let (theta, omega, alpha) = (state.theta(), state.theta_dot(), state.theta_ddot());
    let along = |s: f64| -> (Vec<f64>, Vec<f64>) {
        (
            theta.iter().zip(omega).map(|(t, w)| t + s * w).collect(),
            omega.iter().zip(alpha).map(|(w, a)| w + s * a).collect(),
        )
    };
    let (ta, wa) = along(h);
    let (tb, wb) = along(-h);
    let p_ahead = momenta(chain, &ta, &wa, gravity)?;
    let p_behind = momenta(chain, &tb, &wb, gravity)?;

    let mut t = theta.to_vec();
    (0..t.len())
        .map(|i| {
            let base = t[i];
            t[i] = base + h;
            let ahead = lagrangian_at(chain, &t, omega, gravity)?;
            t[i] = base - h;
            let behind = lagrangian_at(chain, &t, omega, gravity)?;
            t[i] = base;
            let dl_dtheta = (ahead - behind) / (2.0 * h);
            let dp_dt = (p_ahead[i] - p_behind[i]) / (2.0 * h);
            Ok(dp_dt - dl_dtheta)
        })
        .collect()
}

/// `max |a - b| / max(max |a|, max |b|)`, or 0 when both vectors are zero.
pub fn relative_error(a: &[f64], b: &[f64]) -> f64 {
    let diff = a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
    let scale = a.iter().chain(b).fold(0.0f64, |m, v| m.max(v.abs()));
    if scale > 0.0 {
        diff / scale
    } else {
        diff
    }
}

/// Outcome of a randomized closed-form vs. oracle comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub max_relative_error: f64,
    pub worst_case_state: JointState,
    pub samples: usize,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.max_relative_error <= CROSS_CHECK_TOLERANCE
    }
}

fn uniform(rng: &mut ChaCha8Rng, (lo, hi): (f64, f64)) -> f64 {
    let unit = (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
    lo + (hi - lo) * unit
}

/// Reproducible random states inside the sampling box.
pub fn random_states(n_links: usize, samples: usize, seed: u64) -> Vec<JointState> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples)
        .map(|_| {
            let theta = (0..n_links).map(|_| uniform(&mut rng, SAMPLE_THETA)).collect();
            let theta_dot = (0..n_links).map(|_| uniform(&mut rng, SAMPLE_THETA_DOT)).collect();
            let theta_ddot = (0..n_links).map(|_| uniform(&mut rng, SAMPLE_THETA_DDOT)).collect();
            JointState {
                theta,
                theta_dot,
                theta_ddot,
            }
        })
        .collect()
}

/// Compares [`dynamics::inverse_dynamics`] with [`euler_lagrange_fd`] over
/// `samples` seeded random states.
pub fn cross_check(chain: &LinkChain, gravity: f64, samples: usize, seed: u64) -> Result<OracleReport> {
    cross_check_against(chain, gravity, samples, seed, DEFAULT_STEP, &dynamics::inverse_dynamics)
}

/// Inverse dynamics under test: `(chain, state, gravity) -> tau`.
pub type InverseDynamicsFn<'a> = &'a dyn Fn(&LinkChain, &JointState, f64) -> Result<Vec<f64>>;

/// [`cross_check`] with a caller-supplied closed form and FD step.
pub fn cross_check_against(
    chain: &LinkChain,
    gravity: f64,
    samples: usize,
    seed: u64,
    h: f64,
    closed_form: InverseDynamicsFn<'_>,
) -> Result<OracleReport> {
    if samples == 0 {
        return Err(Error::Domain {
            argument: "samples",
            requirement: "must be at least 1",
        });
    }
    let mut worst: Option<(f64, JointState)> = None;
    for state in random_states(chain.n_links(), samples, seed) {
        let exact = closed_form(chain, &state, gravity)?;
        let oracle = euler_lagrange_fd(chain, &state, gravity, h)?;
        let err = relative_error(&exact, &oracle);
        // strict comparison keeps the lowest index on ties; NaN always wins
        let replace = match &worst {
            None => true,
            Some((w, _)) => err > *w || (err.is_nan() && !w.is_nan()),
        };
        if replace {
            worst = Some((err, state));
        }
    }
    let (max_relative_error, worst_case_state) = worst.expect("samples >= 1");
    Ok(OracleReport {
        max_relative_error,
        worst_case_state,
        samples,
    })
}

/// Energy bookkeeping of a simulated trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyAudit {
    /// See [`DynamicsTrajectory::energy_drift`].
    pub drift: f64,
    /// Actuator work over the trajectory, J.
    pub work: f64,
    /// Final minus initial total energy, J.
    pub delta_energy: f64,
}

impl EnergyAudit {
    /// `|W - dE| / max(|W|, |dE|)`.
    pub fn work_energy_mismatch(&self) -> f64 {
        relative_error(&[self.work], &[self.delta_energy])
    }
}

pub fn energy_audit(traj: &DynamicsTrajectory) -> EnergyAudit {
    let delta_energy = match (traj.energies.first(), traj.energies.last()) {
        (Some(a), Some(b)) => b.total - a.total,
        _ => 0.0,
    };
    EnergyAudit {
        drift: traj.energy_drift(),
        work: traj.work_done(),
        delta_energy,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn jamia() -> LinkChain {
        LinkChain::uniform_rods(vec![0.030, 0.015, 0.010], 0.1325).unwrap()
    }

    #[test]
    fn lagrangian_basics() {
        let chain = jamia();
        let rest = JointState::at_rest(vec![0.0; 3]).unwrap();
        assert_eq!(lagrangian(&chain, &rest, 9.81).unwrap(), 0.0);
        let s = JointState::moving(vec![0.3, 0.1, -0.5], vec![1.0, 2.0, -1.0]).unwrap();
        let k = dynamics::kinetic_energy(&chain, &s).unwrap();
        assert_eq!(lagrangian(&chain, &s, 0.0).unwrap(), k);
        let p = dynamics::potential_energy(&chain, s.theta(), 9.81).unwrap();
        assert_eq!(lagrangian(&chain, &s, 9.81).unwrap(), k - p);
    }

    #[test]
    fn single_link_newton_law() {
        let chain = LinkChain::new(vec![0.03], vec![0.004], vec![0.015], vec![3e-7]).unwrap();
        let alpha = 7.0;
        let s = JointState::new(vec![0.4], vec![0.0], vec![alpha]).unwrap();
        let tau = euler_lagrange_fd(&chain, &s, 0.0, DEFAULT_STEP).unwrap();
        let expected = (3e-7 + 0.004 * 0.015 * 0.015) * alpha;
        assert!((tau[0] - expected).abs() <= 1e-8 * expected);
    }

    #[test]
    fn static_hold_agrees_with_closed_form() {
        let chain = jamia();
        let s = JointState::at_rest(vec![0.0; 3]).unwrap();
        let fd = euler_lagrange_fd(&chain, &s, 9.81, DEFAULT_STEP).unwrap();
        let cf = dynamics::inverse_dynamics(&chain, &s, 9.81).unwrap();
        assert!(relative_error(&cf, &fd) < 1e-8);
    }

    #[test]
    fn rejects_bad_step() {
        let s = JointState::at_rest(vec![0.0; 3]).unwrap();
        assert!(euler_lagrange_fd(&jamia(), &s, 9.81, 0.0).is_err());
        assert!(euler_lagrange_fd(&jamia(), &s, 9.81, f64::NAN).is_err());
    }

    #[test]
    fn cross_check_is_deterministic() {
        let a = cross_check(&jamia(), 9.81, 20, 7).unwrap();
        let b = cross_check(&jamia(), 9.81, 20, 7).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.samples, 20);
        let one = cross_check(&jamia(), 9.81, 1, 7).unwrap();
        assert_eq!(one.samples, 1);
        assert_eq!(one.worst_case_state, random_states(3, 1, 7).remove(0));
        assert!(cross_check(&jamia(), 9.81, 0, 7).is_err());
    }

    #[test]
    fn relative_error_of_zero_vectors() {
        assert_eq!(relative_error(&[0.0, 0.0], &[0.0, 0.0]), 0.0);
        assert_eq!(relative_error(&[1.0, 0.0], &[0.5, 0.0]), 0.5);
    }
}
