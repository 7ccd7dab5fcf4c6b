//! Planar forward kinematics.

use alloc::vec::Vec;

use libm::{cos, sin};

use crate::error::{Error, Result};
use crate::model::{relative_to_absolute, LinkChain};

/// A point in the finger's plane, meters.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PlanarPoint {
    pub x: f64,
    pub y: f64,
}

impl PlanarPoint {
    pub fn norm(&self) -> f64 {
        libm::hypot(self.x, self.y)
    }
}

/// Fingertip position for absolute link angles.
pub fn fingertip_position(chain: &LinkChain, theta_abs: &[f64]) -> Result<PlanarPoint> {
    chain.expect_len(theta_abs.len())?;
    Ok(chain
        .lengths()
        .iter()
        .zip(theta_abs)
        .fold(PlanarPoint::default(), |p, (l, t)| PlanarPoint {
            x: p.x + l * cos(*t),
            y: p.y + l * sin(*t),
        }))
}

/// Positions of the distal end of every link; the last entry is the fingertip.
pub fn joint_positions(chain: &LinkChain, theta_abs: &[f64]) -> Result<Vec<PlanarPoint>> {
    chain.expect_len(theta_abs.len())?;
    let mut p = PlanarPoint::default();
    Ok(chain
        .lengths()
        .iter()
        .zip(theta_abs)
        .map(|(l, t)| {
            p.x += l * cos(*t);
            p.y += l * sin(*t);
            p
        })
        .collect())
}

/// One row of an equal-angle sweep. `theta` is the common relative angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub theta: f64,
    pub tip: PlanarPoint,
}

/// Sweeps every joint through the same relative angle `theta`, sampled
/// uniformly over `[theta_start, theta_end]` with both endpoints included.
pub fn equal_angle_sweep(
    chain: &LinkChain,
    theta_start: f64,
    theta_end: f64,
    steps: usize,
) -> Result<Vec<SweepRow>> {
    if steps < 2 {
        return Err(Error::Domain {
            argument: "steps",
            requirement: "must be at least 2",
        });
    }
    if !(theta_start.is_finite() && theta_end.is_finite() && theta_end > theta_start) {
        return Err(Error::Domain {
            argument: "theta_end",
            requirement: "must be finite and greater than theta_start",
        });
    }
    let n = chain.n_links();
    let span = theta_end - theta_start;
    let last = (steps - 1) as f64;
    (0..steps)
        .map(|k| {
            let theta = if k == steps - 1 {
                theta_end
            } else {
                theta_start + span * (k as f64 / last)
            };
            let rel = alloc::vec![theta; n];
            let tip = fingertip_position(chain, &relative_to_absolute(&rel))?;
            Ok(SweepRow { theta, tip })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use core::f64::consts::{FRAC_PI_2, FRAC_PI_6, PI};
    use proptest::prelude::*;

    fn jamia() -> LinkChain {
        LinkChain::uniform_rods(vec![0.030, 0.015, 0.010], 0.1325).unwrap()
    }

    fn close(p: PlanarPoint, x: f64, y: f64, tol: f64) -> bool {
        (p.x - x).abs() <= tol && (p.y - y).abs() <= tol
    }

    // Hand evaluation of 30cos(k*30deg) etc. in mm.
    const TIP_30_X_MM: f64 = 33.480_762_113_533_16;
    const TIP_30_Y_MM: f64 = 37.990_381_056_766_58;

    #[test]
    fn straight_finger_reaches_55_mm() {
        let p = fingertip_position(&jamia(), &[0.0; 3]).unwrap();
        assert!(close(p, 0.055, 0.0, 1e-15));
    }

    #[test]
    fn right_angle_joints() {
        let abs = relative_to_absolute(&[FRAC_PI_2; 3]);
        let p = fingertip_position(&jamia(), &abs).unwrap();
        assert!(close(p, -0.015, 0.020, 1e-12));
    }

    #[test]
    fn thirty_degree_joints() {
        let abs = relative_to_absolute(&[FRAC_PI_6; 3]);
        let p = fingertip_position(&jamia(), &abs).unwrap();
        assert!(close(p, TIP_30_X_MM / 1e3, TIP_30_Y_MM / 1e3, 1e-12));
        let joints = joint_positions(&jamia(), &abs).unwrap();
        // second joint: drop the 10 mm distal term (10 cos 90, 10 sin 90)
        assert!(close(joints[1], TIP_30_X_MM / 1e3, (TIP_30_Y_MM - 10.0) / 1e3, 1e-12));
    }

    #[test]
    fn collinear_joints() {
        let joints = joint_positions(&jamia(), &[0.0; 3]).unwrap();
        let xs: Vec<f64> = joints.iter().map(|p| p.x).collect();
        assert!((xs[0] - 0.030).abs() < 1e-15);
        assert!((xs[1] - 0.045).abs() < 1e-15);
        assert!((xs[2] - 0.055).abs() < 1e-15);
        assert!(joints.iter().all(|p| p.y == 0.0));
    }

    #[test]
    fn dimension_mismatch() {
        assert_eq!(
            fingertip_position(&jamia(), &[0.0; 2]),
            Err(Error::DimensionMismatch { expected: 3, found: 2 })
        );
        assert!(joint_positions(&jamia(), &[0.0; 4]).is_err());
    }

    #[test]
    fn sweep_endpoints_and_interior() {
        let rows = equal_angle_sweep(&jamia(), 0.0, FRAC_PI_2, 91).unwrap();
        assert_eq!(rows.len(), 91);
        assert!(close(rows[0].tip, 0.055, 0.0, 1e-12));
        assert_eq!(rows[90].theta, FRAC_PI_2);
        assert!(close(rows[90].tip, -0.015, 0.020, 1e-12));
        assert!(close(rows[30].tip, TIP_30_X_MM / 1e3, TIP_30_Y_MM / 1e3, 1e-12));
        assert!(rows.windows(2).all(|w| w[1].theta > w[0].theta));
    }

    #[test]
    fn sweep_rejects_bad_arguments() {
        assert!(equal_angle_sweep(&jamia(), 0.0, 1.0, 1).is_err());
        assert!(equal_angle_sweep(&jamia(), 1.0, 1.0, 10).is_err());
    }

    proptest! {
        #[test]
        fn reach_is_bounded(t in prop::collection::vec(-PI..PI, 3)) {
            let chain = jamia();
            let p = fingertip_position(&chain, &t).unwrap();
            prop_assert!(p.norm() <= chain.reach() * (1.0 + 1e-12));
        }

        #[test]
        fn straight_chain_attains_reach(a in -PI..PI) {
            let chain = jamia();
            let p = fingertip_position(&chain, &[a; 3]).unwrap();
            prop_assert!((p.norm() - chain.reach()).abs() <= 1e-14);
        }

        #[test]
        fn rotating_all_links_rotates_tip(t in prop::collection::vec(-PI..PI, 3), delta in -PI..PI) {
            let chain = jamia();
            let p = fingertip_position(&chain, &t).unwrap();
            let shifted: Vec<f64> = t.iter().map(|a| a + delta).collect();
            let q = fingertip_position(&chain, &shifted).unwrap();
            let (s, c) = (sin(delta), cos(delta));
            prop_assert!((q.x - (c * p.x - s * p.y)).abs() <= 1e-12);
            prop_assert!((q.y - (s * p.x + c * p.y)).abs() <= 1e-12);
        }

        #[test]
        fn last_joint_is_the_tip(t in prop::collection::vec(-PI..PI, 3)) {
            let chain = jamia();
            let joints = joint_positions(&chain, &t).unwrap();
            prop_assert_eq!(*joints.last().unwrap(), fingertip_position(&chain, &t).unwrap());
        }
    }
}
