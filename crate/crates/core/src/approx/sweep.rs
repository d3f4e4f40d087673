//! Parameter sweeps over many pages or GOPs on paired noise.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::image::GrayImage;
use super::mapping::{build_video_mapping, build_webpage_mapping, PriorityMapping};
use super::payload::{GopPayload, Payload, Ratio, WebPagePayload, P_FRAMES};
use super::throughput::{gain, performance, ThroughputParams};
use super::transfer::{received_quality, simulate_transfer_policies, TransferCounts};
use crate::channel::ChannelConfig;
use crate::error::Result;
use crate::fec::{CodeSpec, DecoderConfig};
use crate::rng::substream;
use crate::uep::BitErrorProfile;

/// Substream tag for page contents.
const PAGE_STREAM: u64 = 0x50_47;

/// Totals of one protection policy over a batch of items.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PolicyOutcome {
    pub counts: TransferCounts,
    pub payload_bytes: f64,
    /// Mean received quality over the items that could be scored.
    pub quality: Option<f64>,
}

impl PolicyOutcome {
    pub fn performance(&self, params: &ThroughputParams) -> Result<f64> {
        performance(&self.counts, params, self.payload_bytes)
    }

    /// Pools another batch into this one. Quality is weighted by payload size.
    pub fn merge(&mut self, other: &PolicyOutcome) {
        self.quality = match (self.quality, other.quality) {
            (Some(a), Some(b)) => {
                Some((a * self.payload_bytes + b * other.payload_bytes) / (self.payload_bytes + other.payload_bytes))
            }
            (a, b) => a.or(b),
        };
        self.counts += other.counts;
        self.payload_bytes += other.payload_bytes;
    }
}

/// Runs `items` payloads through every policy and pools the results.
fn run_batch(
    code: &CodeSpec,
    cfg: &ChannelConfig,
    dec: &DecoderConfig,
    mapping: &PriorityMapping,
    policies: &[Vec<bool>],
    items: u64,
    make: impl Fn(u64) -> Result<Payload> + Sync,
) -> Result<Vec<PolicyOutcome>> {
    let refs: Vec<&[bool]> = policies.iter().map(Vec::as_slice).collect();
    let per_item: Vec<Vec<(TransferCounts, f64, Option<f64>)>> = (0..items)
        .into_par_iter()
        .map(|item| {
            let payload = make(item)?;
            let bytes = payload.size_bytes() as f64;
            simulate_transfer_policies(&payload, mapping, &refs, code, cfg, dec, item)?
                .into_iter()
                .map(|s| Ok((s.counts(), bytes, received_quality(&payload, &s.received)?)))
                .collect()
        })
        .collect::<Result<_>>()?;
    let mut out = vec![PolicyOutcome::default(); policies.len()];
    for (p, o) in out.iter_mut().enumerate() {
        let (mut qsum, mut qn) = (0.0, 0usize);
        for item in &per_item {
            let (c, b, q) = item[p];
            o.counts += c;
            o.payload_bytes += b;
            if let Some(q) = q {
                qsum += q;
                qn += 1;
            }
        }
        o.quality = (qn > 0).then(|| qsum / qn as f64);
    }
    Ok(out)
}

/// Outcomes for quality levels `levels` followed by full protection, for
/// `pages` pages that each carry `image` and fresh random text.
#[allow(clippy::too_many_arguments)]
pub fn webpage_outcomes(
    code: &CodeSpec,
    profile: &BitErrorProfile,
    cfg: &ChannelConfig,
    dec: &DecoderConfig,
    image: &GrayImage,
    ratio: Ratio,
    levels: &[u8],
    pages: u64,
) -> Result<Vec<PolicyOutcome>> {
    let mut policies = Vec::with_capacity(levels.len() + 1);
    let mut layout = None;
    for &k in levels {
        let m = build_webpage_mapping(code, profile, ratio, k)?;
        policies.push(m.protected.clone());
        layout = Some(m);
    }
    let layout = match layout {
        Some(m) => m,
        None => build_webpage_mapping(code, profile, ratio, 0)?,
    };
    policies.push(layout.full_protection());
    run_batch(code, cfg, dec, &layout, &policies, pages, |item| {
        let mut rng = substream(cfg.rng_seed, &[PAGE_STREAM, item]);
        Ok(WebPagePayload::with_random_text(image.clone(), ratio, &mut rng)?.into())
    })
}

/// Outcomes for 0..=14 protected P-frames over `gops` copies of `gop`.
pub fn video_outcomes(
    code: &CodeSpec,
    profile: &BitErrorProfile,
    cfg: &ChannelConfig,
    dec: &DecoderConfig,
    gop: &GopPayload,
    gops: u64,
) -> Result<Vec<PolicyOutcome>> {
    let mappings: Vec<PriorityMapping> = (0..=P_FRAMES)
        .map(|n| build_video_mapping(code, profile, n))
        .collect::<Result<_>>()?;
    let policies: Vec<Vec<bool>> = mappings.iter().map(|m| m.protected.clone()).collect();
    run_batch(code, cfg, dec, &mappings[0], &policies, gops, |_| Ok(gop.clone().into()))
}

/// One row of a sweep table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub ratio_or_npframes: String,
    pub scenario: String,
    pub gain_percent: f64,
    pub quality_score: Option<f64>,
    pub ebno_db: f64,
}

/// Gain of each outcome over `baseline`, in percent.
pub fn gain_percent(outcome: &PolicyOutcome, baseline: &PolicyOutcome, params: &ThroughputParams) -> Result<f64> {
    Ok(100.0 * gain(outcome.performance(params)?, baseline.performance(params)?))
}

/// Web-page sweep over `ratios`, reporting each quality level and the
/// full-protection baseline against that baseline.
#[allow(clippy::too_many_arguments)]
pub fn webpage_sweep(
    code: &CodeSpec,
    profile: &BitErrorProfile,
    cfg: &ChannelConfig,
    dec: &DecoderConfig,
    params: &ThroughputParams,
    image: &GrayImage,
    ratios: &[Ratio],
    levels: &[u8],
    pages: u64,
) -> Result<Vec<SweepRow>> {
    let mut rows = Vec::new();
    for &ratio in ratios {
        let out = webpage_outcomes(code, profile, cfg, dec, image, ratio, levels, pages)?;
        let base = out[levels.len()];
        let names = levels.iter().map(|k| format!("k={k}")).chain(["baseline".to_string()]);
        for (name, o) in names.zip(&out) {
            rows.push(SweepRow {
                ratio_or_npframes: ratio.to_string(),
                scenario: format!("{}/{name}", code.kind()),
                gain_percent: gain_percent(o, &base, params)?,
                quality_score: o.quality,
                ebno_db: cfg.ebno_db,
            });
        }
    }
    Ok(rows)
}

/// Video sweep over 0..=14 protected P-frames; 14 is the baseline.
pub fn video_sweep(
    code: &CodeSpec,
    profile: &BitErrorProfile,
    cfg: &ChannelConfig,
    dec: &DecoderConfig,
    params: &ThroughputParams,
    gop: &GopPayload,
    gops: u64,
) -> Result<Vec<SweepRow>> {
    let out = video_outcomes(code, profile, cfg, dec, gop, gops)?;
    let base = out[P_FRAMES];
    out.iter()
        .enumerate()
        .map(|(n, o)| {
            Ok(SweepRow {
                ratio_or_npframes: n.to_string(),
                scenario: format!("{}/video", code.kind()),
                gain_percent: gain_percent(o, &base, params)?,
                quality_score: o.quality,
                ebno_db: cfg.ebno_db,
            })
        })
        .collect()
}

pub fn write_sweep_csv<W: std::io::Write>(rows: &[SweepRow], w: W) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record(["ratio_or_npframes", "scenario", "gain_percent", "quality_score", "ebno_db"])?;
    for r in rows {
        wr.write_record([
            r.ratio_or_npframes.clone(),
            r.scenario.clone(),
            format!("{:.6}", r.gain_percent),
            r.quality_score.map(|q| format!("{q:.6}")).unwrap_or_default(),
            format!("{:.2}", r.ebno_db),
        ])?;
    }
    wr.flush()?;
    Ok(())
}
