//! Experiment presets, configuration, CSV output and convergence sweeps
//! on top of the `mflow` core.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod config;
pub mod error;
pub mod plot;
pub mod run;
pub mod stats;
pub mod sweep;
pub mod table;

pub use config::{ClassParams, ExperimentConfig, Preset};
pub use error::{HarnessError, HarnessResult};
pub use run::{plan, run_preset, run_preset_full, Plan, Reference, RunOutput};
pub use sweep::{sweep_report, SweepLine, SweepReport};
pub use table::{Replica, ResultRow, ResultTable, Stat};
