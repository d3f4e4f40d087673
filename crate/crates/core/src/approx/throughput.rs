//! Loss-dependent TCP throughput and the resulting transfer times.

use serde::{Deserialize, Serialize};

use super::transfer::TransferCounts;
use crate::error::{Error, Result};

/// One-way link delay in seconds.
pub const LINK_DELAY: f64 = 1.38e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ThroughputParams {
    /// Maximum congestion window, packets.
    pub w_max: f64,
    /// Seconds.
    pub rtt: f64,
    /// Seconds.
    pub rto: f64,
    /// Packets acknowledged per ACK.
    pub b_ack: f64,
    /// Bytes.
    pub packet_size: f64,
}

impl Default for ThroughputParams {
    fn default() -> Self {
        let rtt = 2.0 * LINK_DELAY;
        ThroughputParams {
            w_max: 64.0,
            rtt,
            rto: 4.0 * rtt,
            b_ack: 2.0,
            packet_size: 1500.0,
        }
    }
}

impl ThroughputParams {
    pub fn validate(&self) -> Result<()> {
        let all = [self.w_max, self.rtt, self.rto, self.b_ack, self.packet_size];
        if all.iter().any(|v| !v.is_finite() || *v <= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "throughput parameters must be positive: {self:?}"
            )));
        }
        if self.rto < self.rtt {
            return Err(Error::InvalidArgument("RTO must not be shorter than RTT".into()));
        }
        Ok(())
    }
}

/// Throughput in packets per second at loss probability `p`.
pub fn throughput_packets(p: f64, params: &ThroughputParams) -> Result<f64> {
    if !(0.0..1.0).contains(&p) {
        return Err(Error::InvalidArgument(format!("loss probability {p} is outside [0, 1)")));
    }
    params.validate()?;
    let a = params.w_max / params.rtt;
    if p == 0.0 {
        return Ok(a);
    }
    let bp = params.b_ack * p;
    let b = params.rtt * (2.0 * bp / 3.0).sqrt()
        + params.rto * 3.0 * (3.0 * bp / 8.0).sqrt() * p * (1.0 + 32.0 * p * p);
    Ok(a.min(1.0 / b))
}

/// Throughput in bytes per second at loss probability `p`.
pub fn throughput(p: f64, params: &ThroughputParams) -> Result<f64> {
    Ok(throughput_packets(p, params)? * params.packet_size)
}

/// Seconds to deliver `payload_bytes`, inflated by the retransmitted share,
/// at the throughput the observed loss fraction allows.
pub fn transfer_time(counts: &TransferCounts, params: &ThroughputParams, payload_bytes: f64) -> Result<f64> {
    if counts.total_codewords == 0 {
        return Err(Error::InvalidArgument("no codewords were transferred".into()));
    }
    let sent = payload_bytes * counts.transmissions() as f64 / counts.total_codewords as f64;
    Ok(sent / throughput(counts.loss_fraction(), params)?)
}

pub fn performance(counts: &TransferCounts, params: &ThroughputParams, payload_bytes: f64) -> Result<f64> {
    Ok(1.0 / transfer_time(counts, params, payload_bytes)?)
}

/// Relative improvement of `perf` over `baseline`.
pub fn gain(perf: f64, baseline: f64) -> f64 {
    (perf - baseline) / baseline
}
