//! CSV output. Numbers are written with a fixed number of significant digits
//! (or decimals), `.` as the separator and no locale dependence, so repeated
//! runs are byte-identical.

use std::fmt::Write as _;

use grip_core::dynamics::DynamicsTrajectory;
use grip_core::kinematics::SweepRow;
use grip_core::statics::StaticsReport;
use grip_core::verify::OracleReport;

/// Six significant digits, in the style of C's `%#.6g` but with Rust's
/// exponent notation (`1.23457e-5`).
pub fn sig6(v: f64) -> String {
    if !v.is_finite() {
        return format!("{v}");
    }
    if v == 0.0 {
        return "0.00000".to_string();
    }
    let sci = format!("{v:.5e}");
    let exp: i32 = sci[sci.find('e').expect("exponent") + 1..].parse().expect("integer exponent");
    if (-4..6).contains(&exp) {
        format!("{:.*}", (5 - exp) as usize, v)
    } else {
        sci
    }
}

/// Fixed decimals with negative zero folded to zero.
pub fn fixed(v: f64, decimals: usize) -> String {
    let s = format!("{v:.decimals$}");
    if s.starts_with('-') && s[1..].chars().all(|c| c == '0' || c == '.') {
        s[1..].to_string()
    } else {
        s
    }
}

fn numbered<'a>(prefix: &'a str, suffix: &'a str, n: usize) -> impl Iterator<Item = String> + 'a {
    (1..=n).map(move |i| format!("{prefix}{i}{suffix}"))
}

/// `theta_deg,x_mm,y_mm`, three decimals.
pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("theta_deg,x_mm,y_mm\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{}",
            fixed(r.theta.to_degrees(), 3),
            fixed(r.tip.x * 1e3, 3),
            fixed(r.tip.y * 1e3, 3)
        );
    }
    out
}

/// `quantity,value,unit` in millimeter/newton units.
pub fn statics_csv(report: &StaticsReport) -> String {
    let mut out = String::from("quantity,value,unit\n");
    let mut row = |q: &str, v: f64, unit: &str| {
        let _ = writeln!(out, "{q},{},{unit}", sig6(v));
    };
    row("grip_force", report.grip_force, "N");
    for (i, m) in report.joint_moments.iter().enumerate() {
        row(&format!("joint_moment_{}", i + 1), m * 1e3, "N-mm");
    }
    row("max_moment", report.max_moment * 1e3, "N-mm");
    row("tendon_tension", report.tendon_tension, "N");
    row("actuator_torque", report.actuator_torque, "N-m");
    row("payload_per_finger", report.payload_per_finger, "kg");
    row("payload_total", report.payload_total, "kg");
    row("min_wire_diameter", report.min_wire_diameter * 1e3, "mm");
    out
}

/// `t_s,theta1_rad,...,omega1,...,tau1,...,ke_j,pe_j,e_total_j`
pub fn trajectory_csv(traj: &DynamicsTrajectory) -> String {
    let n = traj.states.first().map_or(0, |s| s.n());
    let header: Vec<String> = std::iter::once("t_s".to_string())
        .chain(numbered("theta", "_rad", n))
        .chain(numbered("omega", "", n))
        .chain(numbered("tau", "", n))
        .chain(["ke_j", "pe_j", "e_total_j"].map(String::from))
        .collect();
    let mut out = header.join(",");
    out.push('\n');
    for k in 0..traj.len() {
        let s = &traj.states[k];
        let e = &traj.energies[k];
        let fields: Vec<String> = std::iter::once(traj.time[k])
            .chain(s.theta().iter().copied())
            .chain(s.theta_dot().iter().copied())
            .chain(traj.applied_torques[k].iter().copied())
            .chain([e.kinetic, e.potential, e.total])
            .map(sig6)
            .collect();
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

/// Header plus the single report row
/// `samples,max_rel_err,worst_theta...,worst_omega...`.
pub fn oracle_csv(report: &OracleReport) -> String {
    let n = report.worst_case_state.n();
    let header: Vec<String> = ["samples", "max_rel_err"]
        .map(String::from)
        .into_iter()
        .chain(numbered("worst_theta", "", n))
        .chain(numbered("worst_omega", "", n))
        .collect();
    let values: Vec<String> = std::iter::once(report.samples.to_string())
        .chain(std::iter::once(sig6(report.max_relative_error)))
        .chain(report.worst_case_state.theta().iter().map(|v| sig6(*v)))
        .chain(report.worst_case_state.theta_dot().iter().map(|v| sig6(*v)))
        .collect();
    format!("{}\n{}\n", header.join(","), values.join(","))
}
