//! Base-station model: jobs, FIFO encoder nodes, allocation policies and
//! scheduling metrics.

pub mod metrics;
pub mod node;
pub mod policy;

pub use metrics::{compute_metrics, metrics_json, write_trace_csv, JobRecord, SchedMetrics};
pub use node::{make_nodes, Completion, EncoderNode, WorkloadJob};
pub use policy::{
    minqueue_assign, random_assign, smab_assign, smab_reward, smab_update, wftm_assign, Algorithm, SmabState,
};
