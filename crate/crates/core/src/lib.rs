//! Modeling core for tendon-driven multi-finger grippers.
//!
//! Every finger is a planar serial chain of rigid links whose orientations
//! are stored as *absolute* angles measured from the world x-axis. On top of
//! that representation the crate provides:
//!
//! * [`kinematics`]: fingertip and joint positions, equal-angle workspace sweeps,
//! * [`statics`]: fingertip force to joint moments, tendon tension, actuator
//!   torque, payload capacity and minimum tendon wire diameter,
//! * [`dynamics`]: energies, mass matrix, Coriolis and gravity terms, inverse
//!   dynamics and RK4 forward simulation for chains of any length,
//! * [`verify`]: finite-difference Euler-Lagrange oracles used to check the
//!   closed-form dynamics.
//!
//! The crate is `no_std` and only needs `alloc`. File formats and the command
//! line live in the companion `grip` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

mod error;
pub mod dynamics;
pub mod kinematics;
pub mod linalg;
pub mod model;
pub mod statics;
pub mod verify;

pub use error::{Error, Result};
pub use model::{
    absolute_to_relative, relative_to_absolute, Finger, HandModel, JointState, LinkChain,
    PhasePoint, TendonDrive,
};
