//! Experiment drivers: full runs, parameter-vanishing continuation
//! studies, and manufactured-solution verification.

mod continuation;
mod mms;
mod presets;
mod run;

pub use continuation::{
    continuation_study, ContinuationSchedule, ContinuationTable, RungResult, Stage, MONITOR_NAMES,
};
pub use mms::{manufactured_solution_test, MmsConfig, MmsReport, SourceTiming};
pub use presets::{InitSource, InitialData, Preset, PresetSpec};
pub use run::{run_observed, run_simulation, RunFailure, RunOptions, RunOutput};

use thiserror::Error;

use crate::error::SolverError;
use crate::io::snapshot::SnapshotError;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Snapshot(#[from] SnapshotError),
    #[error("invalid initial data: {0}")]
    InvalidInit(String),
    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),
}

#[cfg(test)]
mod tests;
