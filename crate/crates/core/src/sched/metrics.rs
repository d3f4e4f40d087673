//! Per-job trace records and the summary metrics computed from them.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::fec::CodeKind;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JobRecord {
    pub job_id: u64,
    pub arrival: f64,
    pub node_id: usize,
    pub start: f64,
    pub finish: f64,
    pub kind: CodeKind,
    pub size_mb: f64,
}

impl JobRecord {
    pub fn wait(&self) -> f64 {
        self.start - self.arrival
    }

    pub fn flow(&self) -> f64 {
        self.finish - self.arrival
    }

    pub fn processing(&self) -> f64 {
        self.finish - self.start
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SchedMetrics {
    pub jobs: usize,
    /// Total size over total processing time, MB per tick.
    pub avg_throughput: f64,
    /// Ticks.
    pub avg_wait: f64,
    /// Ticks.
    pub avg_flow: f64,
    /// Last finish minus first arrival, ticks.
    pub makespan: f64,
}

/// All zeros for an empty trace.
pub fn compute_metrics(trace: &[JobRecord]) -> SchedMetrics {
    if trace.is_empty() {
        return SchedMetrics::default();
    }
    let n = trace.len() as f64;
    let first = trace.iter().map(|r| r.arrival).fold(f64::INFINITY, f64::min);
    let last = trace.iter().map(|r| r.finish).fold(f64::NEG_INFINITY, f64::max);
    SchedMetrics {
        jobs: trace.len(),
        avg_throughput: trace.iter().map(|r| r.size_mb).sum::<f64>() / trace.iter().map(JobRecord::processing).sum::<f64>(),
        avg_wait: trace.iter().map(JobRecord::wait).sum::<f64>() / n,
        avg_flow: trace.iter().map(JobRecord::flow).sum::<f64>() / n,
        makespan: last - first,
    }
}

pub fn write_trace_csv<W: Write>(trace: &[JobRecord], w: W) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record(["job_id", "arrival", "node_id", "start", "finish", "kind"])?;
    for r in trace {
        wr.write_record([
            r.job_id.to_string(),
            format!("{}", r.arrival),
            r.node_id.to_string(),
            format!("{:.6}", r.start),
            format!("{:.6}", r.finish),
            r.kind.to_string(),
        ])?;
    }
    wr.flush()?;
    Ok(())
}

pub fn metrics_json(m: &SchedMetrics) -> Result<String> {
    Ok(serde_json::to_string_pretty(m)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(id: u64, arrival: f64, start: f64, finish: f64) -> JobRecord {
        JobRecord {
            job_id: id,
            arrival,
            node_id: 0,
            start,
            finish,
            kind: CodeKind::Ldpc,
            size_mb: 2.0,
        }
    }

    #[test]
    fn hand_trace() {
        let t = [
            rec(0, 0.0, 0.0, 4.0),
            rec(1, 1.0, 4.0, 6.0),
            rec(2, 2.0, 2.0, 3.0),
            rec(3, 3.0, 6.0, 10.0),
            rec(4, 5.0, 5.0, 7.0),
        ];
        let m = compute_metrics(&t);
        assert_eq!(m.jobs, 5);
        assert!((m.avg_wait - (0.0 + 3.0 + 0.0 + 3.0 + 0.0) / 5.0).abs() < 1e-12);
        assert!((m.avg_flow - (4.0 + 5.0 + 1.0 + 7.0 + 2.0) / 5.0).abs() < 1e-12);
        assert_eq!(m.makespan, 10.0);
        let thr = (5.0 * 2.0) / (4.0 + 2.0 + 1.0 + 4.0 + 2.0);
        assert!((m.avg_throughput - thr).abs() < 1e-12);
    }

    #[test]
    fn empty_trace() {
        assert_eq!(compute_metrics(&[]), SchedMetrics::default());
    }
}
