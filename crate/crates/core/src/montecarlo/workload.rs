//! Random web-page workloads.

use rand::Rng;
use rand_distr::{Beta, Distribution, Gamma};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How each job's quality level is chosen.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QualityPolicy {
    Fixed(u8),
    /// Draw `levels[i]` with probability proportional to `weights[i]`.
    Choice { levels: Vec<u8>, weights: Vec<f64> },
}

impl Default for QualityPolicy {
    fn default() -> Self {
        QualityPolicy::Fixed(1)
    }
}

impl QualityPolicy {
    pub fn levels(&self) -> Vec<u8> {
        match self {
            QualityPolicy::Fixed(k) => vec![*k],
            QualityPolicy::Choice { levels, .. } => levels.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct WorkloadParams {
    pub size_shape: f64,
    /// MB.
    pub size_scale: f64,
    pub ratio_alpha: f64,
    pub ratio_beta: f64,
    pub quality: QualityPolicy,
}

impl Default for WorkloadParams {
    fn default() -> Self {
        WorkloadParams {
            size_shape: 2.0,
            size_scale: 1.5,
            ratio_alpha: 0.6,
            ratio_beta: 1.8,
            quality: QualityPolicy::default(),
        }
    }
}

/// The job attributes that do not depend on the encoders.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WorkloadSample {
    pub size_mb: f64,
    pub text_ratio: f64,
    pub quality_level: u8,
}

/// Validated samplers for [`WorkloadParams`].
#[derive(Debug, Clone)]
pub struct WorkloadSampler {
    size: Gamma<f64>,
    ratio: Beta<f64>,
    quality: QualityPolicy,
}

impl WorkloadSampler {
    pub fn new(params: &WorkloadParams) -> Result<Self> {
        let size = Gamma::new(params.size_shape, params.size_scale)
            .map_err(|e| Error::InvalidArgument(format!("size distribution: {e}")))?;
        let ratio = Beta::new(params.ratio_alpha, params.ratio_beta)
            .map_err(|e| Error::InvalidArgument(format!("ratio distribution: {e}")))?;
        if let QualityPolicy::Choice { levels, weights } = &params.quality {
            let valid = !levels.is_empty()
                && levels.len() == weights.len()
                && weights.iter().all(|w| w.is_finite() && *w >= 0.0)
                && weights.iter().sum::<f64>() > 0.0;
            if !valid {
                return Err(Error::InvalidArgument("bad quality level distribution".into()));
            }
        }
        Ok(WorkloadSampler {
            size,
            ratio,
            quality: params.quality.clone(),
        })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> WorkloadSample {
        // Gamma can underflow to exactly zero for tiny shapes; keep sizes positive.
        let size_mb = self.size.sample(rng).max(f64::MIN_POSITIVE);
        let text_ratio = self.ratio.sample(rng);
        let quality_level = match &self.quality {
            QualityPolicy::Fixed(k) => *k,
            QualityPolicy::Choice { levels, weights } => {
                let total: f64 = weights.iter().sum();
                let mut x = rng.random::<f64>() * total;
                let mut pick = levels[levels.len() - 1];
                for (l, w) in levels.iter().zip(weights) {
                    if x < *w {
                        pick = *l;
                        break;
                    }
                    x -= w;
                }
                pick
            }
        };
        WorkloadSample {
            size_mb,
            text_ratio,
            quality_level,
        }
    }
}

/// One draw from the default workload distributions.
pub fn sample_workload<R: Rng + ?Sized>(rng: &mut R) -> WorkloadSample {
    WorkloadSampler::new(&WorkloadParams::default())
        .expect("default parameters are valid")
        .sample(rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::substream;

    #[test]
    fn choice_policy_respects_weights() {
        let params = WorkloadParams {
            quality: QualityPolicy::Choice {
                levels: vec![0, 3],
                weights: vec![0.0, 1.0],
            },
            ..Default::default()
        };
        let s = WorkloadSampler::new(&params).unwrap();
        let mut rng = substream(5, &[]);
        assert!((0..100).all(|_| s.sample(&mut rng).quality_level == 3));
    }

    #[test]
    fn rejects_bad_params() {
        let bad = WorkloadParams {
            size_shape: -1.0,
            ..Default::default()
        };
        assert!(WorkloadSampler::new(&bad).is_err());
        let bad = WorkloadParams {
            quality: QualityPolicy::Choice {
                levels: vec![1],
                weights: vec![],
            },
            ..Default::default()
        };
        assert!(WorkloadSampler::new(&bad).is_err());
    }
}
