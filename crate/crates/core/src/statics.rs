//! Tendon force chain for a straightened finger.
//!
//! A fingertip force `F` perpendicular to the extended finger produces joint
//! moments `M_k = F * (L_k + ... + L_n)`. The proximal moment is the largest;
//! it sets the tendon tension over the joint pulley, which in turn sets the
//! actuator torque and the minimum wire diameter.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::model::{LinkChain, TendonDrive};

/// Every quantity of the force chain, SI units.
#[derive(Debug, Clone, PartialEq)]
pub struct StaticsReport {
    pub grip_force: f64,
    /// N·m, proximal to distal.
    pub joint_moments: Vec<f64>,
    pub max_moment: f64,
    /// N
    pub tendon_tension: f64,
    /// N·m
    pub actuator_torque: f64,
    /// kg
    pub payload_per_finger: f64,
    /// kg
    pub payload_total: f64,
    /// m
    pub min_wire_diameter: f64,
}

/// Friction-limited payload, kg.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Payload {
    pub per_finger: f64,
    pub total: f64,
}

fn non_negative(value: f64, argument: &'static str) -> Result<()> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(Error::Domain {
            argument,
            requirement: "must be finite and >= 0",
        })
    }
}

/// Joint moments (N·m) for a fingertip force `force` (N), proximal first.
pub fn joint_moments(chain: &LinkChain, force: f64) -> Result<Vec<f64>> {
    non_negative(force, "force")?;
    // suffix sums of the link lengths, accumulated from the tip
    let mut arm = 0.0;
    let mut moments: Vec<f64> = chain
        .lengths()
        .iter()
        .rev()
        .map(|l| {
            arm += l;
            force * arm
        })
        .collect();
    moments.reverse();
    Ok(moments)
}

pub fn tendon_tension(max_moment: f64, drive: &TendonDrive) -> f64 {
    max_moment / drive.pulley_radius
}

pub fn actuator_torque(tension: f64, drive: &TendonDrive) -> f64 {
    tension * drive.actuator_radius
}

/// Mass held by friction: `F * mu / g` per finger, times `n_fingers`.
pub fn payload_capacity(force: f64, friction: f64, gravity: f64, n_fingers: usize) -> Result<Payload> {
    non_negative(force, "force")?;
    non_negative(friction, "friction")?;
    if !(gravity.is_finite() && gravity > 0.0) {
        return Err(Error::Domain {
            argument: "gravity",
            requirement: "must be finite and > 0",
        });
    }
    if n_fingers == 0 {
        return Err(Error::Domain {
            argument: "n_fingers",
            requirement: "must be at least 1",
        });
    }
    let per_finger = force * friction / gravity;
    Ok(Payload {
        per_finger,
        total: n_fingers as f64 * per_finger,
    })
}

/// Smallest round wire that carries `tension` at the allowable stress.
pub fn min_wire_diameter(tension: f64, allowable_stress: f64) -> Result<f64> {
    non_negative(tension, "tension")?;
    if !(allowable_stress.is_finite() && allowable_stress > 0.0) {
        return Err(Error::Domain {
            argument: "allowable_stress",
            requirement: "must be finite and > 0",
        });
    }
    Ok(libm::sqrt(4.0 * tension / (PI * allowable_stress)))
}

/// Runs the whole force chain for one finger at grip force `force`.
pub fn full_statics_report(
    chain: &LinkChain,
    drive: &TendonDrive,
    force: f64,
    n_fingers: usize,
    gravity: f64,
) -> Result<StaticsReport> {
    let joint_moments = joint_moments(chain, force)?;
    let max_moment = joint_moments.iter().copied().fold(0.0, f64::max);
    let tendon_tension = tendon_tension(max_moment, drive);
    let actuator_torque = actuator_torque(tendon_tension, drive);
    let payload = payload_capacity(force, drive.friction_coefficient, gravity, n_fingers)?;
    let min_wire_diameter = min_wire_diameter(tendon_tension, drive.allowable_stress)?;
    Ok(StaticsReport {
        grip_force: force,
        joint_moments,
        max_moment,
        tendon_tension,
        actuator_torque,
        payload_per_finger: payload.per_finger,
        payload_total: payload.total,
        min_wire_diameter,
    })
}
