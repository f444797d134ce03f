//! Command-line harness around the simulators in `fragsim-core`.
//!
//! Every run writes a versioned CSV plus a JSON sidecar carrying the spec
//! and build description, so a record can be regenerated bit for bit.

pub mod config;
pub mod error;
pub mod grid;
pub mod plotdata;
pub mod records;
pub mod run;
pub mod sidecar;
pub mod verify;

pub use config::{ConfigFile, Engine, ExperimentSpec};
pub use error::{HarnessError, Result};
pub use run::{budget_from_env, run_simulation, run_tails, RunSummary};
pub use verify::{CheckResult, Suite, Verifier};
