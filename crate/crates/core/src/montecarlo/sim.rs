//! Time-stepped base-station simulation.

use std::collections::HashMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::gain_table::GainTable;
use super::workload::{WorkloadParams, WorkloadSampler};
use crate::error::{Error, Result};
use crate::rng::substream;
use crate::sched::{
    compute_metrics, make_nodes, minqueue_assign, random_assign, smab_assign, smab_reward, smab_update,
    wftm_assign, Algorithm, JobRecord, SchedMetrics, SmabState, WorkloadJob,
};

/// Substream tags: arrivals are shared by every algorithm and scenario run
/// with the same seed; policy randomness is kept apart.
const ARRIVAL_STREAM: u64 = 0x41_52;
const POLICY_STREAM: u64 = 0x50_4f;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SmabParams {
    pub alpha: f64,
    pub c: f64,
    pub gain_sigma_frac: f64,
}

impl Default for SmabParams {
    fn default() -> Self {
        SmabParams {
            alpha: crate::sched::policy::DEFAULT_ALPHA,
            c: crate::sched::policy::DEFAULT_EXPLORATION,
            gain_sigma_frac: crate::sched::policy::DEFAULT_GAIN_SIGMA_FRAC,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SimConfig {
    pub num_ldpc: usize,
    pub num_polar: usize,
    /// Per-tick arrival probability.
    pub injection_prob: f64,
    pub ebno_db: f64,
    /// Ticks during which jobs may arrive; the system then drains.
    pub horizon: u64,
    /// Simulated milliseconds per tick (reporting only).
    pub tick_ms: f64,
    pub workload: WorkloadParams,
    pub seed: u64,
    pub algorithm: Algorithm,
    pub smab: SmabParams,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            num_ldpc: 4,
            num_polar: 2,
            injection_prob: 0.5,
            ebno_db: 1.5,
            horizon: 10_000,
            tick_ms: 1.0,
            workload: WorkloadParams::default(),
            seed: 0,
            algorithm: Algorithm::MinQueue,
            smab: SmabParams::default(),
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.num_ldpc + self.num_polar == 0 {
            return Err(Error::NoNodes);
        }
        if !(0.0..=1.0).contains(&self.injection_prob) {
            return Err(Error::InvalidArgument(format!(
                "injection probability {} is outside [0, 1]",
                self.injection_prob
            )));
        }
        if self.horizon == 0 {
            return Err(Error::InvalidArgument("horizon must be positive".into()));
        }
        if !self.ebno_db.is_finite() || !(self.tick_ms > 0.0) {
            return Err(Error::InvalidArgument("Eb/No and tick length must be finite and positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimOutput {
    pub metrics: SchedMetrics,
    /// Completed jobs in job id order.
    pub trace: Vec<JobRecord>,
}

/// Runs arrivals for `horizon` ticks and then until every queue is empty.
/// Within a tick, a new job is assigned first and then every node works
/// for one tick.
pub fn run_simulation(cfg: &SimConfig, table: &GainTable) -> Result<SimOutput> {
    cfg.validate()?;
    let sampler = WorkloadSampler::new(&cfg.workload)?;
    let mut nodes = make_nodes(cfg.num_ldpc, cfg.num_polar)?;
    let mut arrivals = substream(cfg.seed, &[ARRIVAL_STREAM]);
    let mut policy_rng = substream(cfg.seed, &[POLICY_STREAM, cfg.algorithm as u64]);
    let mut smab = SmabState::with_params(nodes.len(), cfg.smab.alpha, cfg.smab.c, cfg.smab.gain_sigma_frac);
    let mut pending: HashMap<u64, (WorkloadJob, usize)> = HashMap::new();
    let mut trace = Vec::new();
    let mut next_id = 0u64;
    let mut t = 0u64;
    while t < cfg.horizon || nodes.iter().any(|n| !n.is_idle()) {
        if t < cfg.horizon && arrivals.random::<f64>() < cfg.injection_prob {
            let w = sampler.sample(&mut arrivals);
            let job = table.make_job(&w, cfg.ebno_db, next_id, t)?;
            next_id += 1;
            let gain = |i: usize| table.gain(nodes[i].kind, cfg.ebno_db, job.text_ratio, job.quality_level);
            let node = match cfg.algorithm {
                Algorithm::Wftm => {
                    // Weight = performance relative to the baseline, 1 + gain,
                    // which stays positive where the gain itself may be zero.
                    let weights = (0..nodes.len()).map(|i| Ok(1.0 + gain(i)?)).collect::<Result<Vec<_>>>()?;
                    wftm_assign(&job, &nodes, &weights)?
                }
                Algorithm::Smab => {
                    let arm = smab_assign(&smab, &nodes)?;
                    let r = smab_reward(gain(arm)?, nodes[arm].occupancy(), smab.gain_sigma_frac, &mut policy_rng);
                    smab_update(&mut smab, arm, r);
                    arm
                }
                Algorithm::Random => random_assign(&nodes, &mut policy_rng)?,
                Algorithm::MinQueue => minqueue_assign(&job, &nodes)?,
            };
            nodes[node].enqueue(&job);
            pending.insert(job.job_id, (job, node));
        }
        for n in nodes.iter_mut() {
            for c in n.advance(t as f64, 1.0) {
                let (job, node) = pending.remove(&c.job_id).expect("completed job was assigned");
                trace.push(JobRecord {
                    job_id: job.job_id,
                    arrival: job.arrival as f64,
                    node_id: node,
                    start: c.start,
                    finish: c.finish,
                    kind: n.kind,
                    size_mb: job.size_mb,
                });
            }
        }
        t += 1;
    }
    trace.sort_by_key(|r| r.job_id);
    Ok(SimOutput {
        metrics: compute_metrics(&trace),
        trace,
    })
}
