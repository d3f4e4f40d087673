//! Per-cell transfer gains and effective encoder rates, measured once and
//! looked up by the scheduler.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::workload::{WorkloadParams, WorkloadSample, WorkloadSampler};
use crate::approx::payload::Ratio;
use crate::approx::sweep::{webpage_outcomes, PolicyOutcome};
use crate::approx::throughput::ThroughputParams;
use crate::approx::GrayImage;
use crate::channel::ChannelConfig;
use crate::error::{Error, Result};
use crate::fec::{CodeKind, CodeSpec, DecoderConfig};
use crate::rng::{derive_seed, substream};
use crate::sched::WorkloadJob;
use crate::uep::characterize;

const KINDS: [CodeKind; 2] = [CodeKind::Ldpc, CodeKind::Polar];

/// The table shipped with the crate, built by the `gain_table` example.
const DEFAULT_TABLE: &str = include_str!("../../data/gain_table.json");

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GainEntry {
    pub code: CodeKind,
    pub ebno_db: f64,
    pub ratio: Ratio,
    pub quality_level: u8,
    /// Performance over the weaker code's full-protection baseline, minus one.
    pub gain: f64,
    /// Processing rate in payload units per tick, `1 + gain`: the weaker
    /// code under full protection runs at one unit per tick.
    pub rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GainTable {
    /// MB per payload unit.
    pub base_rate: f64,
    pub ebno_grid: Vec<f64>,
    pub ratios: Vec<Ratio>,
    pub quality_levels: Vec<u8>,
    /// Ordered by code (LDPC, polar), then Eb/No, ratio and quality level.
    pub entries: Vec<GainEntry>,
}

fn kind_index(kind: CodeKind) -> usize {
    match kind {
        CodeKind::Ldpc => 0,
        CodeKind::Polar => 1,
    }
}

/// Eb/No grid 1.0, 1.1, ..., 2.0 dB.
pub fn default_ebno_grid() -> Vec<f64> {
    (0..=10).map(|i| 1.0 + 0.1 * i as f64).collect()
}

impl GainTable {
    pub fn default_table() -> GainTable {
        GainTable::from_json(DEFAULT_TABLE).expect("bundled gain table is valid")
    }

    fn index(&self, kind: CodeKind, e: usize, r: usize, q: usize) -> usize {
        ((kind_index(kind) * self.ebno_grid.len() + e) * self.ratios.len() + r) * self.quality_levels.len() + q
    }

    pub fn validate(&self) -> Result<()> {
        if self.ebno_grid.is_empty() || self.ratios.is_empty() || self.quality_levels.is_empty() {
            return Err(Error::InvalidArgument("gain table has an empty axis".into()));
        }
        if !(self.base_rate.is_finite() && self.base_rate > 0.0) {
            return Err(Error::InvalidArgument("gain table base rate must be positive".into()));
        }
        let expected = KINDS.len() * self.ebno_grid.len() * self.ratios.len() * self.quality_levels.len();
        if self.entries.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                actual: self.entries.len(),
            });
        }
        for kind in KINDS {
            for (e, &eb) in self.ebno_grid.iter().enumerate() {
                for (r, &ratio) in self.ratios.iter().enumerate() {
                    for (q, &ql) in self.quality_levels.iter().enumerate() {
                        let x = &self.entries[self.index(kind, e, r, q)];
                        let here = x.code == kind
                            && (x.ebno_db - eb).abs() < 1e-9
                            && x.ratio == ratio
                            && x.quality_level == ql;
                        if !here {
                            return Err(Error::MissingCell(format!("{kind} {eb} dB {ratio} k={ql}")));
                        }
                        if !(x.gain.is_finite() && x.rate.is_finite() && x.rate > 0.0) {
                            return Err(Error::InvalidArgument(format!(
                                "non-finite entry at {kind} {eb} dB {ratio} k={ql}"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let t: GainTable = serde_json::from_str(s)?;
        t.validate()?;
        Ok(t)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let s = std::fs::read_to_string(path).map_err(|e| match e.kind() {
            std::io::ErrorKind::NotFound => Error::MissingFile(path.to_path_buf()),
            _ => Error::Io(e),
        })?;
        GainTable::from_json(&s)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }

    fn nearest(grid: impl Iterator<Item = f64>, x: f64) -> usize {
        let mut best = (0, f64::INFINITY);
        for (i, g) in grid.enumerate() {
            let d = (g - x).abs();
            if d < best.1 - 1e-12 {
                best = (i, d);
            }
        }
        best.0
    }

    /// Cell nearest to `ebno_db` and to the text fraction `text_ratio`;
    /// the quality level must be on the grid.
    pub fn lookup(&self, kind: CodeKind, ebno_db: f64, text_ratio: f64, quality_level: u8) -> Result<&GainEntry> {
        let q = self
            .quality_levels
            .iter()
            .position(|&l| l == quality_level)
            .ok_or_else(|| Error::MissingCell(format!("quality level {quality_level}")))?;
        let e = Self::nearest(self.ebno_grid.iter().copied(), ebno_db);
        let r = Self::nearest(self.ratios.iter().map(Ratio::text_fraction), text_ratio);
        Ok(&self.entries[self.index(kind, e, r, q)])
    }

    pub fn gain(&self, kind: CodeKind, ebno_db: f64, text_ratio: f64, quality_level: u8) -> Result<f64> {
        Ok(self.lookup(kind, ebno_db, text_ratio, quality_level)?.gain)
    }

    /// MB per tick on an encoder of `kind`.
    pub fn rate(&self, kind: CodeKind, ebno_db: f64, text_ratio: f64, quality_level: u8) -> Result<f64> {
        Ok(self.base_rate * self.lookup(kind, ebno_db, text_ratio, quality_level)?.rate)
    }

    pub fn make_job(&self, w: &WorkloadSample, ebno_db: f64, job_id: u64, arrival: u64) -> Result<WorkloadJob> {
        let rate = |k| self.rate(k, ebno_db, w.text_ratio, w.quality_level);
        let job = WorkloadJob {
            job_id,
            size_mb: w.size_mb,
            text_ratio: w.text_ratio,
            quality_level: w.quality_level,
            arrival,
            tl: w.size_mb / rate(CodeKind::Ldpc)?,
            tp: w.size_mb / rate(CodeKind::Polar)?,
        };
        Ok(job)
    }

    /// Sets `base_rate` so that `nodes` LDPC encoders at `ebno_db` can just
    /// keep up with one arrival every `1 / injection_prob` ticks.
    pub fn calibrate(&mut self, ebno_db: f64, injection_prob: f64, nodes: usize, workload: &WorkloadParams) -> Result<()> {
        if !(injection_prob > 0.0 && injection_prob <= 1.0) || nodes == 0 {
            return Err(Error::InvalidArgument("calibration needs a positive load and nodes".into()));
        }
        let sampler = WorkloadSampler::new(workload)?;
        let mut rng = substream(0, &[0x43_41_4c]);
        let draws = 20_000;
        let mut ticks = 0.0;
        for _ in 0..draws {
            let w = sampler.sample(&mut rng);
            ticks += w.size_mb / self.lookup(CodeKind::Ldpc, ebno_db, w.text_ratio, w.quality_level)?.rate;
        }
        // Mean service time at unit base rate; capacity nodes/mean must equal the load.
        let mean = ticks / draws as f64;
        self.base_rate = mean * injection_prob / nodes as f64;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GainTableConfig {
    pub ebno_grid: Vec<f64>,
    pub ratios: Vec<Ratio>,
    pub quality_levels: Vec<u8>,
    /// Single-codeword pages per batch.
    pub pages: u64,
    /// Batches are added to a cell until its full-protection baseline has
    /// seen this many retransmissions, or `max_pages` is reached.
    pub min_retransmissions: u64,
    pub max_pages: u64,
    /// Characterization trials per code and Eb/No.
    pub profile_trials: u64,
    pub seed: u64,
    pub throughput: ThroughputParams,
    pub decoder: DecoderConfig,
    pub calibration_ebno_db: f64,
    pub calibration_injection_prob: f64,
    pub calibration_ldpc_nodes: usize,
    pub workload: WorkloadParams,
}

impl Default for GainTableConfig {
    fn default() -> Self {
        GainTableConfig {
            ebno_grid: default_ebno_grid(),
            ratios: Ratio::sweep(),
            quality_levels: vec![0, 1],
            pages: 500,
            min_retransmissions: 40,
            max_pages: 20_000,
            profile_trials: 3000,
            seed: 2024,
            throughput: ThroughputParams::default(),
            decoder: DecoderConfig::default(),
            calibration_ebno_db: 1.5,
            calibration_injection_prob: 0.5,
            calibration_ldpc_nodes: 4,
            workload: WorkloadParams::default(),
        }
    }
}

/// Measures every cell: for each Eb/No and code, a fresh UEP profile, then
/// single-codeword pages at each ratio under each quality level and under
/// full protection. Gains are taken against whichever code's
/// full-protection performance is lower at that Eb/No and ratio.
pub fn build_gain_table(codes: &[CodeSpec; 2], cfg: &GainTableConfig) -> Result<GainTable> {
    if codes[0].kind() != CodeKind::Ldpc || codes[1].kind() != CodeKind::Polar {
        return Err(Error::InvalidArgument("codes must be given as [LDPC, polar]".into()));
    }
    if cfg.pages == 0 || cfg.profile_trials == 0 {
        return Err(Error::InvalidArgument("pages and profile trials must be positive".into()));
    }
    let levels = &cfg.quality_levels;
    // outcomes[kind][e][r][policy]
    let mut outcomes: Vec<Vec<Vec<Vec<PolicyOutcome>>>> = Vec::new();
    for (ki, code) in codes.iter().enumerate() {
        let mut per_e = Vec::new();
        for (ei, &eb) in cfg.ebno_grid.iter().enumerate() {
            let profile_cfg = ChannelConfig::new(eb, code.rate(), derive_seed(cfg.seed, &[1, ki as u64, ei as u64]))?;
            let profile = characterize(code, &profile_cfg, &cfg.decoder, cfg.profile_trials)?;
            let mut per_r = Vec::new();
            for &ratio in &cfg.ratios {
                let image = GrayImage::test_pattern(ratio.pixels().max(1), 1);
                let mut pooled: Option<Vec<PolicyOutcome>> = None;
                let mut batch = 0;
                loop {
                    // Both codes share transfer noise at a given Eb/No and batch.
                    let seed = derive_seed(cfg.seed, &[2, ei as u64, batch]);
                    let tx_cfg = ChannelConfig::new(eb, code.rate(), seed)?;
                    let out = webpage_outcomes(code, &profile, &tx_cfg, &cfg.decoder, &image, ratio, levels, cfg.pages)?;
                    match pooled.as_mut() {
                        None => pooled = Some(out),
                        Some(acc) => acc.iter_mut().zip(&out).for_each(|(a, o)| a.merge(o)),
                    }
                    batch += 1;
                    let acc = pooled.as_ref().expect("at least one batch");
                    if acc[levels.len()].counts.retransmissions >= cfg.min_retransmissions
                        || (batch + 1) * cfg.pages > cfg.max_pages
                    {
                        break;
                    }
                }
                per_r.push(pooled.expect("at least one batch"));
            }
            per_e.push(per_r);
        }
        outcomes.push(per_e);
    }
    let params = &cfg.throughput;
    let mut entries = Vec::new();
    for (ki, &kind) in KINDS.iter().enumerate() {
        for (ei, &eb) in cfg.ebno_grid.iter().enumerate() {
            for (ri, &ratio) in cfg.ratios.iter().enumerate() {
                let full = levels.len();
                let weaker = outcomes[0][ei][ri][full]
                    .performance(params)?
                    .min(outcomes[1][ei][ri][full].performance(params)?);
                for (qi, &q) in levels.iter().enumerate() {
                    let o = &outcomes[ki][ei][ri][qi];
                    let gain = o.performance(params)? / weaker - 1.0;
                    entries.push(GainEntry {
                        code: kind,
                        ebno_db: eb,
                        ratio,
                        quality_level: q,
                        gain,
                        rate: 1.0 + gain,
                    });
                }
            }
        }
    }
    let mut table = GainTable {
        base_rate: 1.0,
        ebno_grid: cfg.ebno_grid.clone(),
        ratios: cfg.ratios.clone(),
        quality_levels: levels.clone(),
        entries,
    };
    table.validate()?;
    table.calibrate(
        cfg.calibration_ebno_db,
        cfg.calibration_injection_prob,
        cfg.calibration_ldpc_nodes,
        &cfg.workload,
    )?;
    Ok(table)
}
