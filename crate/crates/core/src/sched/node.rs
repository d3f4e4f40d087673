//! Jobs and the FIFO encoder nodes that process them.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fec::CodeKind;

/// Residual work below this many ticks counts as finished.
const WORK_EPS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorkloadJob {
    pub job_id: u64,
    /// Size in MB.
    pub size_mb: f64,
    /// Fraction of the payload that is text.
    pub text_ratio: f64,
    pub quality_level: u8,
    /// Tick at which the job arrived.
    pub arrival: u64,
    /// Processing ticks on an LDPC encoder.
    pub tl: f64,
    /// Processing ticks on a polar encoder.
    pub tp: f64,
}

impl WorkloadJob {
    pub fn validate(&self) -> Result<()> {
        let ok = self.size_mb > 0.0
            && (0.0..=1.0).contains(&self.text_ratio)
            && self.tl > 0.0
            && self.tp > 0.0
            && self.tl.is_finite()
            && self.tp.is_finite();
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!("invalid job {self:?}")))
        }
    }

    pub fn processing_time(&self, kind: CodeKind) -> f64 {
        match kind {
            CodeKind::Ldpc => self.tl,
            CodeKind::Polar => self.tp,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
struct Queued {
    job_id: u64,
    residual: f64,
    start: Option<f64>,
}

/// A job that left a node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Completion {
    pub job_id: u64,
    pub start: f64,
    pub finish: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EncoderNode {
    pub node_id: usize,
    pub kind: CodeKind,
    queue: VecDeque<Queued>,
    remaining_work: f64,
}

impl EncoderNode {
    pub fn new(node_id: usize, kind: CodeKind) -> Self {
        EncoderNode {
            node_id,
            kind,
            queue: VecDeque::new(),
            remaining_work: 0.0,
        }
    }

    /// Jobs queued or in service.
    pub fn occupancy(&self) -> usize {
        self.queue.len()
    }

    /// Ticks of work left over all queued and in-service jobs.
    pub fn remaining_work(&self) -> f64 {
        self.remaining_work
    }

    pub fn is_idle(&self) -> bool {
        self.queue.is_empty()
    }

    pub fn enqueue(&mut self, job: &WorkloadJob) {
        let p = job.processing_time(self.kind);
        self.queue.push_back(Queued {
            job_id: job.job_id,
            residual: p,
            start: None,
        });
        self.remaining_work += p;
    }

    /// Works for `dt` ticks starting at time `now`, moving to the next job
    /// as soon as one finishes.
    pub fn advance(&mut self, now: f64, dt: f64) -> Vec<Completion> {
        let mut done = Vec::new();
        let mut used = 0.0;
        while used < dt {
            let Some(front) = self.queue.front_mut() else { break };
            let start = *front.start.get_or_insert(now + used);
            let step = front.residual.min(dt - used);
            front.residual -= step;
            used += step;
            if front.residual <= WORK_EPS {
                done.push(Completion {
                    job_id: front.job_id,
                    start,
                    finish: now + used,
                });
                self.queue.pop_front();
            }
        }
        self.remaining_work = self.queue.iter().map(|q| q.residual).sum();
        done
    }
}

/// `ldpc` LDPC nodes followed by `polar` polar nodes, numbered from 0.
pub fn make_nodes(ldpc: usize, polar: usize) -> Result<Vec<EncoderNode>> {
    if ldpc + polar == 0 {
        return Err(Error::NoNodes);
    }
    Ok((0..ldpc)
        .map(|i| EncoderNode::new(i, CodeKind::Ldpc))
        .chain((0..polar).map(|i| EncoderNode::new(ldpc + i, CodeKind::Polar)))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn job(id: u64, tl: f64) -> WorkloadJob {
        WorkloadJob {
            job_id: id,
            size_mb: 1.0,
            text_ratio: 0.2,
            quality_level: 1,
            arrival: 0,
            tl,
            tp: tl,
        }
    }

    #[test]
    fn fifo_with_fractional_work() {
        let mut n = EncoderNode::new(0, CodeKind::Ldpc);
        n.enqueue(&job(1, 1.5));
        n.enqueue(&job(2, 1.0));
        assert_eq!(n.occupancy(), 2);
        assert_eq!(n.remaining_work(), 2.5);
        assert!(n.advance(0.0, 1.0).is_empty());
        let done = n.advance(1.0, 1.0);
        assert_eq!(done, vec![Completion { job_id: 1, start: 0.0, finish: 1.5 }]);
        let done = n.advance(2.0, 1.0);
        assert_eq!(done, vec![Completion { job_id: 2, start: 1.5, finish: 2.5 }]);
        assert!(n.is_idle());
        assert_eq!(n.remaining_work(), 0.0);
    }

    #[test]
    fn node_layout() {
        let nodes = make_nodes(3, 2).unwrap();
        assert_eq!(nodes.iter().filter(|n| n.kind == CodeKind::Polar).count(), 2);
        assert_eq!(nodes[3].node_id, 3);
        assert!(make_nodes(0, 0).is_err());
    }
}
