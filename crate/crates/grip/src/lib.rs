//! File formats and the command line for `grip-core`.
//!
//! * [`config`]: JSON hand configurations (mm / MPa on disk, SI in memory),
//! * [`report`]: CSV writers for sweeps, statics reports, trajectories and
//!   oracle reports,
//! * [`state_file`]: joint-state CSV input for inverse dynamics,
//! * [`cli`]: the `grip` subcommands.

pub mod cli;
pub mod config;
pub mod report;
pub mod state_file;

pub use cli::{run, CommandOutcome};
pub use config::{load_hand_config, parse_hand_config, ConfigError, HandConfig};
