//! The `grip` command line.
//!
//! Exit codes: 0 success, 1 input or config error, 2 numerical failure
//! (divergence, oracle mismatch beyond tolerance). Every failure writes a
//! single `error: ...` line to the error stream; success writes nothing there.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use grip_core::dynamics::{self, ConstantTorque, GravityCompensation, PdHold, TorqueProgram, ZeroTorque};
use grip_core::verify::{self, CROSS_CHECK_TOLERANCE};
use grip_core::{kinematics, statics, Finger, HandModel, PhasePoint};

use crate::config::load_hand_config;
use crate::report;
use crate::state_file;

#[derive(Debug, Parser)]
#[command(name = "grip", version, about = "Kinematics, statics and dynamics of tendon-driven fingers")]
pub struct Cli {
    /// Hand configuration (JSON).
    #[arg(long, global = true, value_name = "PATH")]
    pub hand: Option<PathBuf>,
    /// Finger name from the hand configuration.
    #[arg(long, global = true, value_name = "NAME")]
    pub finger: Option<String>,
    /// Output CSV path, or `-` for standard output. Defaults to `<command>_<finger>.csv`.
    #[arg(long, global = true, value_name = "PATH|-")]
    pub out: Option<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Equal-angle workspace sweep of the fingertip.
    Workspace {
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        min_deg: f64,
        #[arg(long, default_value_t = 90.0, allow_negative_numbers = true)]
        max_deg: f64,
        #[arg(long, default_value_t = 91)]
        steps: usize,
    },
    /// Tendon tension, actuator torque, payload and wire sizing.
    Statics {
        /// Fingertip grip force, N. Defaults to the finger's max_grip_force_n.
        #[arg(long, allow_negative_numbers = true)]
        force: Option<f64>,
        #[arg(long, default_value_t = 3)]
        n_fingers: usize,
    },
    /// Joint torques for every row of a state file.
    Invdyn {
        /// CSV with header theta1..N,omega1..N,alpha1..N.
        #[arg(long, value_name = "PATH")]
        state: PathBuf,
    },
    /// Fixed-step RK4 simulation under a torque program.
    Simulate {
        /// zero | gravity_comp | constant:<tau1,...> | hold:<theta1,...>
        #[arg(long, default_value = "zero")]
        program: String,
        /// Simulated time, s.
        #[arg(long, default_value_t = 1.0)]
        duration: f64,
        /// Integration step, s.
        #[arg(long, default_value_t = dynamics::DEFAULT_DT)]
        dt: f64,
        /// Initial absolute angles, rad (comma separated). Defaults to zeros.
        #[arg(long, allow_hyphen_values = true)]
        theta0: Option<String>,
        /// Initial joint rates, rad/s (comma separated). Defaults to zeros.
        #[arg(long, allow_hyphen_values = true)]
        omega0: Option<String>,
        /// Override the hand's gravity, m/s^2.
        #[arg(long)]
        gravity: Option<f64>,
        /// Proportional gain of `hold`, N·m/rad.
        #[arg(long, default_value_t = PdHold::DEFAULT_KP)]
        kp: f64,
        /// Derivative gain of `hold`, N·m·s/rad.
        #[arg(long, default_value_t = PdHold::DEFAULT_KD)]
        kd: f64,
    },
    /// Cross-check closed-form inverse dynamics against the finite-difference oracle.
    Verify {
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Workspace { .. } => "workspace",
            Command::Statics { .. } => "statics",
            Command::Invdyn { .. } => "invdyn",
            Command::Simulate { .. } => "simulate",
            Command::Verify { .. } => "verify",
        }
    }
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandOutcome {
    pub exit_code: i32,
    pub output_path: Option<PathBuf>,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Numerical(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 1,
            CliError::Numerical(_) => 2,
        }
    }
}

impl From<grip_core::Error> for CliError {
    fn from(e: grip_core::Error) -> Self {
        use grip_core::Error;
        match e {
            Error::Diverged { .. } | Error::NonFiniteState | Error::SingularMassMatrix => {
                CliError::Numerical(e.to_string())
            }
            other => CliError::Input(other.to_string()),
        }
    }
}

fn input(e: impl std::fmt::Display) -> CliError {
    CliError::Input(e.to_string())
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CommandOutcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{}", e.render());
                return CommandOutcome {
                    exit_code: 0,
                    output_path: None,
                };
            }
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("invalid arguments");
            let first = first.strip_prefix("error: ").unwrap_or(first);
            let _ = writeln!(stderr, "error: {first} (see --help)");
            return CommandOutcome {
                exit_code: 1,
                output_path: None,
            };
        }
    };
    match execute(&cli, stdout) {
        Ok(output_path) => CommandOutcome {
            exit_code: 0,
            output_path,
        },
        Err((e, output_path)) => {
            let _ = writeln!(stderr, "error: {e}");
            CommandOutcome {
                exit_code: e.exit_code(),
                output_path,
            }
        }
    }
}

type Failure = (CliError, Option<PathBuf>);

fn fail(e: CliError) -> Failure {
    (e, None)
}

fn parse_list(text: &str, what: &str, n: usize) -> Result<Vec<f64>, CliError> {
    let values = text
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| CliError::Input(format!("{what}: `{}` is not a finite number", s.trim())))
        })
        .collect::<Result<Vec<f64>, _>>()?;
    if values.len() != n {
        return Err(CliError::Input(format!(
            "{what}: expected {n} values (one per link), found {}",
            values.len()
        )));
    }
    Ok(values)
}

fn select<'a>(hand: &'a HandModel, name: &str) -> Result<&'a Finger, CliError> {
    hand.finger(name).ok_or_else(|| {
        let names: Vec<&str> = hand.finger_names().collect();
        CliError::Input(format!("unknown finger `{name}`; available: {}", names.join(", ")))
    })
}

/// Writes `csv` to the requested destination and returns the file path, if any.
fn emit(
    out: Option<&str>,
    default_name: &str,
    csv: &str,
    stdout: &mut dyn Write,
) -> Result<Option<PathBuf>, CliError> {
    match out {
        Some("-") => {
            stdout.write_all(csv.as_bytes()).map_err(input)?;
            Ok(None)
        }
        other => {
            let path = PathBuf::from(other.unwrap_or(default_name));
            std::fs::write(&path, csv)
                .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))?;
            Ok(Some(path))
        }
    }
}

fn execute(cli: &Cli, stdout: &mut dyn Write) -> Result<Option<PathBuf>, Failure> {
    let hand_path: &Path = cli
        .hand
        .as_deref()
        .ok_or_else(|| fail(CliError::Input("missing --hand <PATH>".into())))?;
    let finger_name = cli
        .finger
        .as_deref()
        .ok_or_else(|| fail(CliError::Input("missing --finger <NAME>".into())))?;
    let hand = load_hand_config(hand_path).map_err(|e| fail(input(e)))?;
    let finger = select(&hand, finger_name).map_err(fail)?;
    let chain = &finger.chain;
    let default_name = format!("{}_{}.csv", cli.command.name(), finger.name);
    let out = cli.out.as_deref();
    let emit = |csv: &str, stdout: &mut dyn Write| emit(out, &default_name, csv, stdout).map_err(fail);

    match &cli.command {
        Command::Workspace {
            min_deg,
            max_deg,
            steps,
        } => {
            let rows = kinematics::equal_angle_sweep(chain, min_deg.to_radians(), max_deg.to_radians(), *steps)
                .map_err(|e| fail(e.into()))?;
            emit(&report::sweep_csv(&rows), stdout)
        }
        Command::Statics { force, n_fingers } => {
            let force = force.unwrap_or(finger.tendon.max_grip_force);
            let r = statics::full_statics_report(chain, &finger.tendon, force, *n_fingers, hand.gravity())
                .map_err(|e| fail(e.into()))?;
            emit(&report::statics_csv(&r), stdout)
        }
        Command::Invdyn { state } => {
            let text = std::fs::read_to_string(state)
                .map_err(|e| fail(CliError::Input(format!("cannot read {}: {e}", state.display()))))?;
            let file = state_file::parse_state_file(&text, chain.n_links()).map_err(|e| fail(input(e)))?;
            let torques = file
                .rows
                .iter()
                .map(|row| dynamics::inverse_dynamics(chain, &row.state, hand.gravity()))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| fail(e.into()))?;
            emit(&state_file::torques_csv(&file, &torques), stdout)
        }
        Command::Simulate {
            program,
            duration,
            dt,
            theta0,
            omega0,
            gravity,
            kp,
            kd,
        } => {
            let n = chain.n_links();
            let g = gravity.unwrap_or(hand.gravity());
            if !(g.is_finite() && g >= 0.0) {
                return Err(fail(CliError::Input("--gravity: must be finite and >= 0".into())));
            }
            let theta = match theta0 {
                Some(t) => parse_list(t, "--theta0", n).map_err(fail)?,
                None => vec![0.0; n],
            };
            let omega = match omega0 {
                Some(w) => parse_list(w, "--omega0", n).map_err(fail)?,
                None => vec![0.0; n],
            };
            let initial = PhasePoint::new(theta, omega).map_err(|e| fail(e.into()))?;
            let program: Box<dyn TorqueProgram + '_> = match program.split_once(':') {
                None if program == "zero" => Box::new(ZeroTorque),
                None if program == "gravity_comp" => Box::new(GravityCompensation { chain, gravity: g }),
                Some(("constant", values)) => {
                    Box::new(ConstantTorque(parse_list(values, "constant", n).map_err(fail)?))
                }
                Some(("hold", angles)) => Box::new(PdHold {
                    target: parse_list(angles, "hold", n).map_err(fail)?,
                    kp: *kp,
                    kd: *kd,
                }),
                _ => {
                    return Err(fail(CliError::Input(format!(
                        "unknown torque program `{program}`; expected zero, gravity_comp, constant:<values> or hold:<angles>"
                    ))))
                }
            };
            let traj = dynamics::simulate(chain, &initial, program.as_ref(), g, *duration, *dt)
                .map_err(|e| fail(e.into()))?;
            let path = emit(&report::trajectory_csv(&traj), stdout)?;
            if let Some(p) = &path {
                let _ = writeln!(
                    stdout,
                    "wrote {} ({} samples); energy_drift_rel={}",
                    p.display(),
                    traj.len(),
                    report::sig6(traj.energy_drift())
                );
            }
            Ok(path)
        }
        Command::Verify { samples, seed } => {
            let r = verify::cross_check(chain, hand.gravity(), *samples, *seed).map_err(|e| fail(e.into()))?;
            let path = emit(&report::oracle_csv(&r), stdout)?;
            if let Some(p) = &path {
                let _ = writeln!(
                    stdout,
                    "wrote {}; max_rel_err={} over {} samples",
                    p.display(),
                    report::sig6(r.max_relative_error),
                    r.samples
                );
            }
            if r.passed() {
                Ok(path)
            } else {
                Err((
                    CliError::Numerical(format!(
                        "oracle mismatch: max relative error {} exceeds {CROSS_CHECK_TOLERANCE:e}",
                        report::sig6(r.max_relative_error)
                    )),
                    path,
                ))
            }
        }
    }
}
