//! Scenario configuration, orchestration and CSV output for the `fdelab`
//! command-line tool.
//!
//! Every numeric CSV cell carries 17 significant digits and every file
//! starts with a `#` line stating its units, so identical configurations
//! produce byte-identical files.

mod config;
mod run;

pub use config::{parse_config, ConfigError, Scenario, ScenarioConfig, KEYS};
pub use run::{run, RunError, RunSummary};
