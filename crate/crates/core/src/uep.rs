//! Per-position post-decoding error statistics and the protection orderings
//! derived from them.

use std::io::{Read, Write};
use std::ops::Range;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bits::Bits;
use crate::channel::{transmit, ChannelConfig};
use crate::error::{Error, Result};
use crate::fec::{CodeKind, CodeSpec, DecoderConfig};
use crate::rng::substream;
use crate::stats::{mean, spearman};

/// Substream tag for characterization trials.
const CHARACTERIZE_STREAM: u64 = 0x55_45_50;

/// Number of leading positions summarized as the "head".
pub const HEAD_LEN: usize = 50;

/// How many transmissions hit an error at each information position.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BitErrorProfile {
    pub code_kind: CodeKind,
    pub ebno_db: f64,
    pub trials: u64,
    pub k_info: usize,
    pub error_counts: Vec<u64>,
}

impl BitErrorProfile {
    pub fn new(
        code_kind: CodeKind,
        ebno_db: f64,
        trials: u64,
        error_counts: Vec<u64>,
    ) -> Result<Self> {
        let p = BitErrorProfile {
            code_kind,
            ebno_db,
            trials,
            k_info: error_counts.len(),
            error_counts,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidArgument("profile has zero trials".into()));
        }
        if self.error_counts.len() != self.k_info {
            return Err(Error::LengthMismatch {
                expected: self.k_info,
                actual: self.error_counts.len(),
            });
        }
        if let Some(c) = self.error_counts.iter().find(|&&c| c > self.trials) {
            return Err(Error::InvalidArgument(format!(
                "error count {c} exceeds {} trials",
                self.trials
            )));
        }
        Ok(())
    }

    /// Adds the counts of a profile measured on disjoint trials.
    pub fn merge(&mut self, other: &BitErrorProfile) -> Result<()> {
        if other.k_info != self.k_info || other.code_kind != self.code_kind {
            return Err(Error::InvalidArgument("profiles are not compatible".into()));
        }
        self.trials += other.trials;
        for (a, b) in self.error_counts.iter_mut().zip(&other.error_counts) {
            *a += b;
        }
        Ok(())
    }

    pub fn error_rates(&self) -> Vec<f64> {
        self.error_counts
            .iter()
            .map(|&c| c as f64 / self.trials as f64)
            .collect()
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(["position", "error_count"])?;
        for (i, c) in self.error_counts.iter().enumerate() {
            wr.write_record([i.to_string(), c.to_string()])?;
        }
        wr.flush()?;
        Ok(())
    }

    /// Reads the two-column CSV; metadata is not part of that format.
    pub fn read_csv<R: Read>(r: R, code_kind: CodeKind, ebno_db: f64, trials: u64) -> Result<Self> {
        let mut rd = csv::Reader::from_reader(r);
        let mut counts = Vec::new();
        for (i, rec) in rd.records().enumerate() {
            let rec = rec?;
            let pos: usize = rec
                .get(0)
                .and_then(|s| s.trim().parse().ok())
                .ok_or_else(|| Error::InvalidArgument(format!("bad position on row {}", i + 1)))?;
            if pos != i {
                return Err(Error::InvalidArgument(format!(
                    "positions must be consecutive from 0, found {pos} on row {}",
                    i + 1
                )));
            }
            let c: u64 = rec
                .get(1)
                .and_then(|s| s.trim().parse().ok())
                .ok_or_else(|| Error::InvalidArgument(format!("bad count on row {}", i + 1)))?;
            counts.push(c);
        }
        BitErrorProfile::new(code_kind, ebno_db, trials, counts)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let p: BitErrorProfile = serde_json::from_str(s)?;
        p.validate()?;
        Ok(p)
    }
}

fn run_trial(code: &CodeSpec, cfg: &ChannelConfig, dec: &DecoderConfig, trial: u64) -> Result<Vec<usize>> {
    let mut rng = substream(cfg.rng_seed, &[CHARACTERIZE_STREAM, trial]);
    let payload = Bits::random(code.payload_capacity(), &mut rng);
    let info = code.info_bits(&payload)?;
    let cw = code.encode_info(&info)?;
    let llrs = transmit(&cw, cfg, &mut rng);
    let out = code.decode(&llrs, dec)?;
    Ok(info
        .iter()
        .zip(out.info.iter())
        .enumerate()
        .filter(|(_, (a, b))| a != b)
        .map(|(i, _)| i)
        .collect())
}

/// Runs trials `range` and accumulates the post-decoding error positions.
/// Each trial draws its payload and noise from its own substream, so
/// splitting a range and merging the pieces reproduces the whole exactly.
pub fn characterize_range(
    code: &CodeSpec,
    cfg: &ChannelConfig,
    dec: &DecoderConfig,
    range: Range<u64>,
) -> Result<BitErrorProfile> {
    if range.is_empty() {
        return Err(Error::InvalidArgument("at least one trial is required".into()));
    }
    cfg.validate()?;
    let k = code.k_info();
    let counts = range
        .clone()
        .into_par_iter()
        .map(|t| run_trial(code, cfg, dec, t))
        .try_fold(
            || vec![0u64; k],
            |mut acc, errs| {
                for i in errs? {
                    acc[i] += 1;
                }
                Ok::<_, Error>(acc)
            },
        )
        .try_reduce(
            || vec![0u64; k],
            |mut a, b| {
                a.iter_mut().zip(&b).for_each(|(x, y)| *x += y);
                Ok(a)
            },
        )?;
    BitErrorProfile::new(code.kind(), cfg.ebno_db, range.end - range.start, counts)
}

/// Measures the error count of every information position over `trials`
/// random transmissions.
pub fn characterize(
    code: &CodeSpec,
    cfg: &ChannelConfig,
    dec: &DecoderConfig,
    trials: u64,
) -> Result<BitErrorProfile> {
    characterize_range(code, cfg, dec, 0..trials)
}

/// Positions sorted from most to least protected (fewest errors first, ties
/// by lower index).
pub fn protection_order(profile: &BitErrorProfile) -> Vec<usize> {
    let mut order: Vec<usize> = (0..profile.error_counts.len()).collect();
    order.sort_by_key(|&i| (profile.error_counts[i], i));
    order
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileSummary {
    pub code_kind: CodeKind,
    pub ebno_db: f64,
    pub trials: u64,
    pub total_errors: u64,
    /// Mean count over positions `0..HEAD_LEN`.
    pub head_mean: f64,
    /// Mean count over the remaining positions.
    pub tail_mean: f64,
    /// `head_mean / tail_mean`; absent when the tail saw no errors.
    pub head_tail_ratio: Option<f64>,
    /// Spearman correlation of position index against count; absent when
    /// the counts are constant.
    pub rank_correlation: Option<f64>,
    /// `min / max` over the counts, 1 when all counts are zero.
    pub min_max_ratio: f64,
}

pub fn summarize(profile: &BitErrorProfile) -> ProfileSummary {
    let counts: Vec<f64> = profile.error_counts.iter().map(|&c| c as f64).collect();
    let split = HEAD_LEN.min(counts.len());
    let head_mean = mean(&counts[..split]);
    let tail_mean = if split < counts.len() {
        mean(&counts[split..])
    } else {
        f64::NAN
    };
    let head_tail_ratio = (tail_mean > 0.0).then(|| head_mean / tail_mean);
    let idx: Vec<f64> = (0..counts.len()).map(|i| i as f64).collect();
    let max = profile.error_counts.iter().copied().max().unwrap_or(0);
    let min = profile.error_counts.iter().copied().min().unwrap_or(0);
    ProfileSummary {
        code_kind: profile.code_kind,
        ebno_db: profile.ebno_db,
        trials: profile.trials,
        total_errors: profile.error_counts.iter().sum(),
        head_mean,
        tail_mean,
        head_tail_ratio,
        rank_correlation: spearman(&idx, &counts),
        min_max_ratio: if max == 0 { 1.0 } else { min as f64 / max as f64 },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn profile(counts: &[u64], trials: u64) -> BitErrorProfile {
        BitErrorProfile::new(CodeKind::Polar, 2.0, trials, counts.to_vec()).unwrap()
    }

    #[test]
    fn order_sorts_by_count_then_index() {
        assert_eq!(protection_order(&profile(&[5, 1, 3], 10)), vec![1, 2, 0]);
        assert_eq!(protection_order(&profile(&[4, 4, 4, 4], 10)), vec![0, 1, 2, 3]);
    }

    #[test]
    fn summary_of_zero_profile() {
        let s = summarize(&profile(&[0; 60], 10));
        assert!(s.rank_correlation.is_none());
        assert!(s.head_tail_ratio.is_none());
        assert_eq!(s.min_max_ratio, 1.0);
    }

    #[test]
    fn summary_of_increasing_profile() {
        let counts: Vec<u64> = (0..100).collect();
        let s = summarize(&profile(&counts, 1000));
        assert!((s.rank_correlation.unwrap() - 1.0).abs() < 1e-12);
        assert!(s.head_tail_ratio.unwrap() < 0.5);
        assert_eq!(s.min_max_ratio, 0.0);
    }

    #[test]
    fn validation() {
        assert!(BitErrorProfile::new(CodeKind::Ldpc, 2.0, 0, vec![0]).is_err());
        assert!(BitErrorProfile::new(CodeKind::Ldpc, 2.0, 3, vec![4]).is_err());
    }

    #[test]
    fn csv_and_json_round_trip() {
        let p = profile(&[3, 0, 7, 1], 9);
        let mut buf = Vec::new();
        p.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("position,error_count\n0,3\n"));
        let back = BitErrorProfile::read_csv(&buf[..], CodeKind::Polar, 2.0, 9).unwrap();
        assert_eq!(back, p);
        assert_eq!(BitErrorProfile::from_json(&p.to_json().unwrap()).unwrap(), p);
        assert!(BitErrorProfile::read_csv("position,error_count\n1,3\n".as_bytes(), CodeKind::Polar, 2.0, 9).is_err());
    }
}
