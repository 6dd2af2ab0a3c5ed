//! Files, statistics and the Monte Carlo experiment harness over
//! [`rstg_core`].

mod error;

pub mod config;
pub mod experiments;
pub mod io;
pub mod output;
pub mod seed;
pub mod stats;

pub use config::{ExperimentConfig, ExperimentKind};
pub use error::{Error, Result};
pub use experiments::{run_experiment, ExperimentResult, TrialRecord};
