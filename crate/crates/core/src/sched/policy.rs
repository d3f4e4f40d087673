//! The four online allocation policies.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::node::{EncoderNode, WorkloadJob};
use crate::error::{Error, Result};
use crate::fec::CodeKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Wftm,
    Smab,
    Random,
    MinQueue,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [Algorithm::Wftm, Algorithm::Smab, Algorithm::Random, Algorithm::MinQueue];

    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::Wftm => "wftm",
            Algorithm::Smab => "smab",
            Algorithm::Random => "random",
            Algorithm::MinQueue => "minqueue",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s.to_ascii_lowercase())
            .ok_or_else(|| Error::InvalidArgument(format!("unknown algorithm {s:?}")))
    }
}

fn argmin_by(nodes: &[EncoderNode], key: impl Fn(usize) -> f64) -> Result<usize> {
    if nodes.is_empty() {
        return Err(Error::NoNodes);
    }
    let mut best = 0;
    let mut best_key = key(0);
    for i in 1..nodes.len() {
        let k = key(i);
        if k < best_key {
            best = i;
            best_key = k;
        }
    }
    Ok(nodes[best].node_id)
}

/// Picks the node whose weighted flow time grows least,
/// `Δ_i = w_i · (remaining_work_i + p_ij)`; ties go to the lowest id.
pub fn wftm_assign(job: &WorkloadJob, nodes: &[EncoderNode], weights: &[f64]) -> Result<usize> {
    if weights.len() != nodes.len() {
        return Err(Error::LengthMismatch {
            expected: nodes.len(),
            actual: weights.len(),
        });
    }
    argmin_by(nodes, |i| {
        weights[i] * (nodes[i].remaining_work() + job.processing_time(nodes[i].kind))
    })
}

/// Uniform over all nodes.
pub fn random_assign<R: Rng + ?Sized>(nodes: &[EncoderNode], rng: &mut R) -> Result<usize> {
    if nodes.is_empty() {
        return Err(Error::NoNodes);
    }
    Ok(nodes[rng.random_range(0..nodes.len())].node_id)
}

/// LDPC when `tl < tp`, polar otherwise (falling back to the other kind if
/// none of the preferred kind exist), then the fewest queued jobs.
pub fn minqueue_assign(job: &WorkloadJob, nodes: &[EncoderNode]) -> Result<usize> {
    if nodes.is_empty() {
        return Err(Error::NoNodes);
    }
    let preferred = if job.tl < job.tp { CodeKind::Ldpc } else { CodeKind::Polar };
    let kind = if nodes.iter().any(|n| n.kind == preferred) {
        preferred
    } else {
        match preferred {
            CodeKind::Ldpc => CodeKind::Polar,
            CodeKind::Polar => CodeKind::Ldpc,
        }
    };
    nodes
        .iter()
        .filter(|n| n.kind == kind)
        .min_by_key(|n| (n.occupancy(), n.node_id))
        .map(|n| n.node_id)
        .ok_or(Error::NoNodes)
}

/// Value estimates for the contextual bandit, one arm per node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmabState {
    pub q_values: Vec<f64>,
    pub pull_counts: Vec<u64>,
    pub total_pulls: u64,
    pub alpha: f64,
    pub c: f64,
    pub gain_sigma_frac: f64,
}

pub const DEFAULT_ALPHA: f64 = 0.1;
pub const DEFAULT_EXPLORATION: f64 = 15.0;
pub const DEFAULT_GAIN_SIGMA_FRAC: f64 = 0.1;

impl SmabState {
    pub fn new(arms: usize) -> Self {
        SmabState::with_params(arms, DEFAULT_ALPHA, DEFAULT_EXPLORATION, DEFAULT_GAIN_SIGMA_FRAC)
    }

    pub fn with_params(arms: usize, alpha: f64, c: f64, gain_sigma_frac: f64) -> Self {
        SmabState {
            q_values: vec![0.0; arms],
            pull_counts: vec![0; arms],
            total_pulls: 0,
            alpha,
            c,
            gain_sigma_frac,
        }
    }
}

/// Any arm not yet pulled (lowest first), otherwise the UCB maximizer
/// `Q_i + c·sqrt(ln t / N_i)`.
pub fn smab_assign(state: &SmabState, nodes: &[EncoderNode]) -> Result<usize> {
    if nodes.is_empty() {
        return Err(Error::NoNodes);
    }
    if state.q_values.len() != nodes.len() {
        return Err(Error::LengthMismatch {
            expected: nodes.len(),
            actual: state.q_values.len(),
        });
    }
    if let Some(i) = state.pull_counts.iter().position(|&n| n == 0) {
        return Ok(nodes[i].node_id);
    }
    let ln_t = (state.total_pulls as f64).ln();
    let ucb = |i: usize| state.q_values[i] + state.c * (ln_t / state.pull_counts[i] as f64).sqrt();
    argmin_by(nodes, |i| -ucb(i))
}

/// Draws the realized gain around `mean_gain` and divides by the node's
/// occupancy plus one.
pub fn smab_reward<R: Rng + ?Sized>(mean_gain: f64, occupancy: usize, sigma_frac: f64, rng: &mut R) -> f64 {
    let sigma = (sigma_frac * mean_gain).abs();
    let gain = if sigma > 0.0 {
        Normal::new(mean_gain, sigma)
            .expect("finite parameters")
            .sample(rng)
    } else {
        mean_gain
    };
    gain.max(0.0) / (occupancy as f64 + 1.0)
}

pub fn smab_update(state: &mut SmabState, arm: usize, reward: f64) {
    state.pull_counts[arm] += 1;
    state.total_pulls += 1;
    state.q_values[arm] += state.alpha * (reward - state.q_values[arm]);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::substream;
    use crate::sched::node::make_nodes;

    fn job(tl: f64, tp: f64) -> WorkloadJob {
        WorkloadJob {
            job_id: 0,
            size_mb: 1.0,
            text_ratio: 0.1,
            quality_level: 1,
            arrival: 0,
            tl,
            tp,
        }
    }

    #[test]
    fn wftm_example() {
        let mut nodes = make_nodes(1, 1).unwrap();
        let mut filler = job(10.0, 10.0);
        filler.job_id = 9;
        nodes[0].enqueue(&filler);
        assert_eq!(wftm_assign(&job(3.0, 5.0), &nodes, &[1.0, 1.0]).unwrap(), 1);
        assert_eq!(wftm_assign(&job(3.0, 5.0), &nodes, &[7.0, 7.0]).unwrap(), 1);
        let empty = make_nodes(2, 2).unwrap();
        assert_eq!(wftm_assign(&job(3.0, 5.0), &empty, &[1.0; 4]).unwrap(), 0);
    }

    #[test]
    fn minqueue_rules() {
        let mut nodes = make_nodes(4, 2).unwrap();
        let j = job(3.0, 5.0);
        for (i, occ) in [2, 0, 1, 4].into_iter().enumerate() {
            for _ in 0..occ {
                nodes[i].enqueue(&j);
            }
        }
        assert_eq!(minqueue_assign(&j, &nodes).unwrap(), 1);
        assert_eq!(minqueue_assign(&job(4.0, 4.0), &nodes).unwrap(), 4);
        let ldpc_only = make_nodes(4, 0).unwrap();
        assert_eq!(minqueue_assign(&job(5.0, 3.0), &ldpc_only).unwrap(), 0);
    }

    #[test]
    fn reward_examples() {
        let mut rng = substream(0, &[]);
        assert!((smab_reward(0.3, 2, 0.0, &mut rng) - 0.1).abs() < 1e-15);
        assert_eq!(smab_reward(0.3, 0, 0.0, &mut rng), 0.3);
        assert_eq!(smab_reward(-1.0, 0, 0.0, &mut rng), 0.0);
    }

    #[test]
    fn cold_start_pulls_every_arm_once() {
        let nodes = make_nodes(4, 2).unwrap();
        let mut st = SmabState::new(6);
        let mut seen = Vec::new();
        for _ in 0..6 {
            let a = smab_assign(&st, &nodes).unwrap();
            seen.push(a);
            smab_update(&mut st, a, 0.5);
        }
        assert_eq!(seen, vec![0, 1, 2, 3, 4, 5]);
        assert_eq!(st.total_pulls, st.pull_counts.iter().sum::<u64>());
    }

    #[test]
    fn algorithm_names() {
        for a in Algorithm::ALL {
            assert_eq!(a.to_string().parse::<Algorithm>().unwrap(), a);
        }
        assert!("fifo".parse::<Algorithm>().is_err());
    }
}
