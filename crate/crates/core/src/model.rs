//! Domain data: link chains, tendon drives, joint states and whole hands.
//!
//! All quantities are SI base units. Angles are absolute, i.e. each link's
//! orientation is measured from the world x-axis; [`relative_to_absolute`]
//! converts from the joint-relative convention.

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Geometry and inertia of one planar finger, base link first.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkChain {
    lengths: Vec<f64>,
    masses: Vec<f64>,
    com_offsets: Vec<f64>,
    inertias: Vec<f64>,
}

impl LinkChain {
    /// Builds a chain, checking every invariant.
    ///
    /// `com_offsets[i]` is the distance from joint `i` to the center of mass
    /// of link `i`; `inertias[i]` is about that center of mass, perpendicular
    /// to the plane of motion.
    pub fn new(
        lengths: Vec<f64>,
        masses: Vec<f64>,
        com_offsets: Vec<f64>,
        inertias: Vec<f64>,
    ) -> Result<Self> {
        let n = lengths.len();
        if n == 0 {
            return Err(Error::Invalid {
                field: "lengths",
                index: None,
                requirement: "at least one link is required",
            });
        }
        for (field, values) in [
            ("masses", &masses),
            ("com_offsets", &com_offsets),
            ("inertias", &inertias),
        ] {
            if values.len() != n {
                return Err(Error::LengthMismatch {
                    field,
                    expected: n,
                    found: values.len(),
                });
            }
        }
        for i in 0..n {
            check(lengths[i].is_finite() && lengths[i] > 0.0, "lengths", i, "must be finite and > 0")?;
            check(masses[i].is_finite() && masses[i] > 0.0, "masses", i, "must be finite and > 0")?;
            check(
                com_offsets[i].is_finite() && com_offsets[i] > 0.0,
                "com_offsets",
                i,
                "must be finite and > 0",
            )?;
            check(com_offsets[i] <= lengths[i], "com_offsets", i, "must not exceed the link length")?;
            check(inertias[i].is_finite() && inertias[i] >= 0.0, "inertias", i, "must be finite and >= 0")?;
        }
        Ok(Self {
            lengths,
            masses,
            com_offsets,
            inertias,
        })
    }

    /// Chain of uniform slender rods: `d = L/2`, `I = m L^2 / 12`, with the
    /// mass taken as `linear_density * L` (kg/m).
    pub fn uniform_rods(lengths: Vec<f64>, linear_density: f64) -> Result<Self> {
        if !(linear_density.is_finite() && linear_density > 0.0) {
            return Err(Error::Domain {
                argument: "linear_density",
                requirement: "must be finite and > 0",
            });
        }
        let masses: Vec<f64> = lengths.iter().map(|l| linear_density * l).collect();
        let com_offsets = lengths.iter().map(|l| l / 2.0).collect();
        let inertias = lengths
            .iter()
            .zip(&masses)
            .map(|(l, m)| m * l * l / 12.0)
            .collect();
        Self::new(lengths, masses, com_offsets, inertias)
    }

    pub fn n_links(&self) -> usize {
        self.lengths.len()
    }

    pub fn lengths(&self) -> &[f64] {
        &self.lengths
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn com_offsets(&self) -> &[f64] {
        &self.com_offsets
    }

    pub fn inertias(&self) -> &[f64] {
        &self.inertias
    }

    /// Total length of the straightened chain.
    pub fn reach(&self) -> f64 {
        self.lengths.iter().sum()
    }

    pub(crate) fn expect_len(&self, found: usize) -> Result<()> {
        if found == self.n_links() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.n_links(),
                found,
            })
        }
    }
}

fn check(ok: bool, field: &'static str, index: usize, requirement: &'static str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Invalid {
            field,
            index: Some(index),
            requirement,
        })
    }
}

fn check_scalar(ok: bool, field: &'static str, requirement: &'static str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Invalid {
            field,
            index: None,
            requirement,
        })
    }
}

/// Tendon transmission of one finger.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TendonDrive {
    /// Joint pulley radius, m. Converts joint moment to cable tension.
    pub pulley_radius: f64,
    /// Actuator spool radius, m. Converts cable tension to motor torque.
    pub actuator_radius: f64,
    /// Allowable wire stress, Pa.
    pub allowable_stress: f64,
    /// Friction coefficient between fingertip and object.
    pub friction_coefficient: f64,
    /// Maximum fingertip grip force, N.
    pub max_grip_force: f64,
}

impl TendonDrive {
    pub fn new(
        pulley_radius: f64,
        actuator_radius: f64,
        allowable_stress: f64,
        friction_coefficient: f64,
        max_grip_force: f64,
    ) -> Result<Self> {
        check_scalar(pulley_radius.is_finite() && pulley_radius > 0.0, "pulley_radius", "must be finite and > 0")?;
        check_scalar(
            actuator_radius.is_finite() && actuator_radius > 0.0,
            "actuator_radius",
            "must be finite and > 0",
        )?;
        check_scalar(
            allowable_stress.is_finite() && allowable_stress > 0.0,
            "allowable_stress",
            "must be finite and > 0",
        )?;
        check_scalar(
            friction_coefficient.is_finite() && friction_coefficient >= 0.0,
            "friction_coefficient",
            "must be finite and >= 0",
        )?;
        check_scalar(
            max_grip_force.is_finite() && max_grip_force >= 0.0,
            "max_grip_force",
            "must be finite and >= 0",
        )?;
        Ok(Self {
            pulley_radius,
            actuator_radius,
            allowable_stress,
            friction_coefficient,
            max_grip_force,
        })
    }
}

/// Absolute joint angles (rad), velocities (rad/s) and accelerations (rad/s^2).
#[derive(Debug, Clone, PartialEq)]
pub struct JointState {
    pub(crate) theta: Vec<f64>,
    pub(crate) theta_dot: Vec<f64>,
    pub(crate) theta_ddot: Vec<f64>,
}

impl JointState {
    pub fn new(theta: Vec<f64>, theta_dot: Vec<f64>, theta_ddot: Vec<f64>) -> Result<Self> {
        let n = theta.len();
        for (field, values) in [("theta_dot", &theta_dot), ("theta_ddot", &theta_ddot)] {
            if values.len() != n {
                return Err(Error::LengthMismatch {
                    field,
                    expected: n,
                    found: values.len(),
                });
            }
        }
        for (field, values) in [
            ("theta", &theta),
            ("theta_dot", &theta_dot),
            ("theta_ddot", &theta_ddot),
        ] {
            if let Some(i) = values.iter().position(|v| !v.is_finite()) {
                return Err(Error::Invalid {
                    field,
                    index: Some(i),
                    requirement: "must be finite",
                });
            }
        }
        Ok(Self {
            theta,
            theta_dot,
            theta_ddot,
        })
    }

    /// Motionless state at the given angles.
    pub fn at_rest(theta: Vec<f64>) -> Result<Self> {
        let n = theta.len();
        Self::new(theta, alloc::vec![0.0; n], alloc::vec![0.0; n])
    }

    /// State with zero acceleration.
    pub fn moving(theta: Vec<f64>, theta_dot: Vec<f64>) -> Result<Self> {
        let n = theta.len();
        Self::new(theta, theta_dot, alloc::vec![0.0; n])
    }

    pub fn n(&self) -> usize {
        self.theta.len()
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn theta_dot(&self) -> &[f64] {
        &self.theta_dot
    }

    pub fn theta_ddot(&self) -> &[f64] {
        &self.theta_ddot
    }
}

/// Position and velocity part of a state, the quantity the integrator advances.
#[derive(Debug, Clone, PartialEq)]
pub struct PhasePoint {
    pub theta: Vec<f64>,
    pub theta_dot: Vec<f64>,
}

impl PhasePoint {
    pub fn new(theta: Vec<f64>, theta_dot: Vec<f64>) -> Result<Self> {
        if theta.len() != theta_dot.len() {
            return Err(Error::LengthMismatch {
                field: "theta_dot",
                expected: theta.len(),
                found: theta_dot.len(),
            });
        }
        Ok(Self { theta, theta_dot })
    }

    pub fn at_rest(theta: Vec<f64>) -> Self {
        let n = theta.len();
        Self {
            theta,
            theta_dot: alloc::vec![0.0; n],
        }
    }

    pub fn is_finite(&self) -> bool {
        self.theta.iter().chain(&self.theta_dot).all(|v| v.is_finite())
    }
}

/// A named finger: its link chain and its tendon drive.
#[derive(Debug, Clone, PartialEq)]
pub struct Finger {
    pub name: String,
    pub chain: LinkChain,
    pub tendon: TendonDrive,
}

/// A whole hand: named fingers plus the gravitational acceleration.
#[derive(Debug, Clone, PartialEq)]
pub struct HandModel {
    fingers: Vec<Finger>,
    gravity: f64,
}

impl HandModel {
    pub fn new(fingers: Vec<Finger>, gravity: f64) -> Result<Self> {
        check_scalar(!fingers.is_empty(), "fingers", "at least one finger is required")?;
        check_scalar(gravity.is_finite() && gravity >= 0.0, "gravity", "must be finite and >= 0")?;
        for (i, finger) in fingers.iter().enumerate() {
            check(!finger.name.is_empty(), "name", i, "must not be empty")?;
            if fingers[..i].iter().any(|f| f.name == finger.name) {
                return Err(Error::Invalid {
                    field: "name",
                    index: Some(i),
                    requirement: "finger names must be unique",
                });
            }
        }
        Ok(Self { fingers, gravity })
    }

    pub fn fingers(&self) -> &[Finger] {
        &self.fingers
    }

    /// Gravitational acceleration, m/s^2, acting along -y.
    pub fn gravity(&self) -> f64 {
        self.gravity
    }

    pub fn finger(&self, name: &str) -> Option<&Finger> {
        self.fingers.iter().find(|f| f.name == name)
    }

    pub fn finger_names(&self) -> impl Iterator<Item = &str> {
        self.fingers.iter().map(|f| f.name.as_str())
    }
}

/// Converts joint-relative angles to absolute angles (cumulative sums).
pub fn relative_to_absolute(theta_rel: &[f64]) -> Vec<f64> {
    theta_rel
        .iter()
        .scan(0.0, |acc, r| {
            *acc += r;
            Some(*acc)
        })
        .collect()
}

/// Inverse of [`relative_to_absolute`]: successive differences.
pub fn absolute_to_relative(theta_abs: &[f64]) -> Vec<f64> {
    let mut prev = 0.0;
    theta_abs
        .iter()
        .map(|&a| {
            let r = a - prev;
            prev = a;
            r
        })
        .collect()
}
