//! Workload sampling, gain tables, the base-station simulation and
//! scenario comparisons.

pub mod gain_table;
pub mod scenario;
pub mod sim;
pub mod workload;

pub use gain_table::{build_gain_table, default_ebno_grid, GainEntry, GainTable, GainTableConfig};
pub use scenario::{run_scenario_comparison, write_scenario_csv, Scenario, ScenarioRow};
pub use sim::{run_simulation, SimConfig, SimOutput, SmabParams};
pub use workload::{sample_workload, QualityPolicy, WorkloadParams, WorkloadSample, WorkloadSampler};
