//! Experiment registry, orchestration and reporting.

pub mod registry;
pub mod report;
pub mod runner;

pub use cross_test::{cross_test, cross_test_scripted, ScoreStats};
pub use registry::{find, registry, ExperimentDef, Regime};
pub use report::{aggregate, read_history, report_rows, t_statistic, write_history, HISTORY_HEADER};
pub use runner::{
    boundary_champion_path, champion_path, run_experiment, RunOptions, RunReport,
};
