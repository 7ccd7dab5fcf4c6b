use grip_core::dynamics::{
    self, forward_acceleration, gravity_vector, inverse_dynamics, mass_matrix, simulate, EomTerms,
    GravityCompensation, ZeroTorque,
};
use grip_core::linalg::SquareMatrix;
use grip_core::verify::{self, cross_check, cross_check_against, energy_audit, euler_lagrange_fd, relative_error};
use grip_core::{Error, JointState, LinkChain, PhasePoint};
use nalgebra::DMatrix;
use splitmix::Rng;

/// Minimal deterministic generator so chains are drawn independently of the
/// crate's own state sampler.
mod splitmix {
    pub struct Rng(u64);

    impl Rng {
        pub fn new(seed: u64) -> Self {
            Self(seed ^ 0x9e37_79b9_7f4a_7c15)
        }

        // splitmix64
        pub fn next(&mut self) -> f64 {
            self.0 = self.0.wrapping_add(0x9e37_79b9_7f4a_7c15);
            let mut z = self.0;
            z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
            z ^= z >> 31;
            (z >> 11) as f64 / (1u64 << 53) as f64
        }

        pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
            lo + (hi - lo) * self.next()
        }
    }
}

fn jamia() -> LinkChain {
    let l = [0.030, 0.015, 0.010];
    let m: Vec<f64> = l.iter().map(|l| 2650.0 * 10e-3 * 5e-3 * l).collect();
    LinkChain::new(
        l.to_vec(),
        m.clone(),
        l.iter().map(|l| l / 2.0).collect(),
        l.iter().zip(&m).map(|(l, m)| m * l * l / 12.0).collect(),
    )
    .unwrap()
}

fn random_chain(rng: &mut Rng) -> LinkChain {
    let n = 1 + (rng.next() * 5.0) as usize;
    let lengths: Vec<f64> = (0..n).map(|_| rng.range(0.005, 0.1)).collect();
    let masses = (0..n).map(|_| rng.range(1e-3, 0.2)).collect();
    let com = lengths.iter().map(|l| l * rng.range(0.05, 1.0)).collect();
    let inertia = (0..n).map(|_| rng.range(0.0, 1e-4)).collect();
    LinkChain::new(lengths, masses, com, inertia).unwrap()
}

fn random_state(rng: &mut Rng, n: usize) -> JointState {
    JointState::new(
        (0..n).map(|_| rng.range(-3.2, 3.2)).collect(),
        (0..n).map(|_| rng.range(-5.0, 5.0)).collect(),
        (0..n).map(|_| rng.range(-20.0, 20.0)).collect(),
    )
    .unwrap()
}

fn to_nalgebra(m: &SquareMatrix) -> DMatrix<f64> {
    DMatrix::from_row_slice(m.dim(), m.dim(), m.as_slice())
}

#[test]
fn mass_matrix_is_symmetric_positive_definite() {
    let mut rng = Rng::new(1);
    for _ in 0..1000 {
        let chain = random_chain(&mut rng);
        let theta: Vec<f64> = (0..chain.n_links()).map(|_| rng.range(-3.2, 3.2)).collect();
        let m = mass_matrix(&chain, &theta).unwrap();
        assert!(m.asymmetry() <= 1e-12 * m.max_abs());
        let eig = to_nalgebra(&m).symmetric_eigen();
        assert!(eig.eigenvalues.iter().all(|e| *e > 0.0), "{:?}", eig.eigenvalues);
        assert!(m.cholesky().is_ok());
    }
}

#[test]
fn jamia_closed_form_matches_oracle() {
    let report = cross_check(&jamia(), 9.81, 1000, 2024).unwrap();
    assert!(report.max_relative_error <= 1e-6, "{report:?}");
    assert!(report.passed());
}

#[test]
fn random_chains_match_oracle() {
    let mut rng = Rng::new(2);
    for k in 0..50 {
        let chain = random_chain(&mut rng);
        let g = if k % 5 == 0 { 0.0 } else { 9.81 };
        let report = cross_check(&chain, g, 20, k).unwrap();
        assert!(report.max_relative_error <= 1e-6, "{chain:?} {report:?}");
    }
}

#[test]
fn finite_difference_error_is_second_order() {
    let chain = jamia();
    let mut rng = Rng::new(3);
    let mut ratios = Vec::new();
    for _ in 0..10 {
        let s = random_state(&mut rng, 3);
        let exact = inverse_dynamics(&chain, &s, 9.81).unwrap();
        let coarse = relative_error(&exact, &euler_lagrange_fd(&chain, &s, 9.81, 1e-4).unwrap());
        let fine = relative_error(&exact, &euler_lagrange_fd(&chain, &s, 9.81, 5e-5).unwrap());
        ratios.push(coarse / fine);
    }
    ratios.sort_by(f64::total_cmp);
    let median = ratios[ratios.len() / 2];
    assert!((3.5..=4.5).contains(&median), "{ratios:?}");
}

/// Mass matrix with the leading entry missing the distal link's `m_3 L_1^2`.
fn truncated_leading_inertia(chain: &LinkChain, s: &JointState, g: f64) -> grip_core::Result<Vec<f64>> {
    let mut terms = dynamics::eom_terms(chain, s, g)?;
    let l1 = chain.lengths()[0];
    let m3 = chain.masses()[2];
    let m11 = terms.mass_matrix.get(0, 0) - m3 * l1 * l1;
    terms.mass_matrix.set(0, 0, m11);
    Ok(EomTerms::torque(&terms, s.theta_ddot()))
}

#[test]
fn corrupted_mass_matrix_fails_the_cross_check() {
    let report = cross_check_against(&jamia(), 9.81, 200, 5, verify::DEFAULT_STEP, &truncated_leading_inertia).unwrap();
    assert!(!report.passed(), "{report:?}");
    assert!(report.max_relative_error > 1e-3);
}

#[test]
fn inverse_forward_round_trip() {
    let mut rng = Rng::new(4);
    let chain = jamia();
    for _ in 0..1000 {
        let s = random_state(&mut rng, 3);
        let tau = inverse_dynamics(&chain, &s, 9.81).unwrap();
        let phase = PhasePoint::new(s.theta().to_vec(), s.theta_dot().to_vec()).unwrap();
        let accel = forward_acceleration(&chain, &phase, &tau, 9.81).unwrap();
        assert!(relative_error(s.theta_ddot(), &accel) <= 1e-9);
    }
}

#[test]
fn free_motion_without_gravity_conserves_energy() {
    let initial = PhasePoint::new(vec![0.3, 0.8, 1.5], vec![1.0, -2.0, 3.0]).unwrap();
    let traj = simulate(&jamia(), &initial, &ZeroTorque, 0.0, 1.0, 1e-4).unwrap();
    assert_eq!(traj.len(), 10_001);
    let drift = traj.energy_drift();
    assert!(drift <= 1e-6, "drift {drift}");
}

#[test]
fn released_pendulum_conserves_energy() {
    let initial = PhasePoint::at_rest(vec![0.0; 3]);
    let traj = simulate(&jamia(), &initial, &ZeroTorque, 9.81, 1.0, 1e-4).unwrap();
    let drift = traj.energy_drift();
    assert!(drift <= 1e-6, "drift {drift}");
    // it really does fall
    assert!(traj.energies.iter().any(|e| e.kinetic > 1e-4));
}

#[test]
fn work_matches_energy_change_for_smooth_torques() {
    let chain = jamia();
    // gravity compensation plus a gentle smooth excitation
    let program = |t: f64, p: &PhasePoint| -> Vec<f64> {
        let g = gravity_vector(&chain, &p.theta, 9.81).unwrap();
        let extra = [2e-5 * (3.0 * t).sin(), -1e-5 * (2.0 * t).cos(), 5e-6 * (1.0 + t)];
        g.iter().zip(extra).map(|(g, e)| g + e).collect()
    };
    let initial = PhasePoint::new(vec![0.2, -0.1, 0.4], vec![0.5, 0.0, -0.5]).unwrap();
    let traj = simulate(&chain, &initial, &program, 9.81, 0.5, 1e-4).unwrap();
    let audit = energy_audit(&traj);
    assert!(audit.delta_energy.abs() > 1e-6, "{audit:?}");
    assert!(audit.work_energy_mismatch() <= 1e-4, "{audit:?}");
}

#[test]
fn gravity_compensation_holds_a_resting_finger() {
    let chain = jamia();
    let initial = PhasePoint::at_rest(vec![0.4, 1.1, -0.3]);
    let program = GravityCompensation {
        chain: &chain,
        gravity: 9.81,
    };
    let traj = simulate(&chain, &initial, &program, 9.81, 0.2, 1e-4).unwrap();
    for s in &traj.states {
        for (a, b) in s.theta().iter().zip(&initial.theta) {
            assert!((a - b).abs() <= 1e-12);
        }
        assert!(s.theta_dot().iter().all(|w| w.abs() <= 1e-12));
    }
    assert_eq!(
        traj.applied_torques[0],
        gravity_vector(&chain, &initial.theta, 9.81).unwrap()
    );
}

#[test]
fn oracle_rejects_mismatched_state() {
    let s = JointState::at_rest(vec![0.0; 2]).unwrap();
    assert_eq!(
        euler_lagrange_fd(&jamia(), &s, 9.81, 1e-6),
        Err(Error::DimensionMismatch { expected: 3, found: 2 })
    );
}
