//! Codeword-by-codeword transfer with selective retransmission.

use std::ops::AddAssign;

use serde::{Deserialize, Serialize};

use super::image::GrayImage;
use super::mapping::{Layout, PriorityMapping};
use super::msssim::{mean_ms_ssim, ms_ssim, scale_count};
use super::payload::{Payload, P_FRAMES};
use crate::channel::{transmit, ChannelConfig};
use crate::error::{Error, Result};
use crate::fec::{CodeSpec, DecoderConfig};
use crate::rng::substream;

/// Substream tag for transfer noise.
const TRANSFER_STREAM: u64 = 0x54_58;

/// Attempts per codeword after which the last decode is accepted as is.
pub const MAX_ATTEMPTS: u64 = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct TransferCounts {
    pub total_codewords: u64,
    pub retransmissions: u64,
}

impl TransferCounts {
    pub fn transmissions(&self) -> u64 {
        self.total_codewords + self.retransmissions
    }

    /// Share of transmissions that had to be repeated.
    pub fn loss_fraction(&self) -> f64 {
        if self.total_codewords == 0 {
            return 0.0;
        }
        self.retransmissions as f64 / self.transmissions() as f64
    }
}

impl AddAssign for TransferCounts {
    fn add_assign(&mut self, rhs: Self) {
        self.total_codewords += rhs.total_codewords;
        self.retransmissions += rhs.retransmissions;
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransferStats {
    pub total_codewords: u64,
    pub retransmissions: u64,
    pub received: Payload,
}

impl TransferStats {
    pub fn counts(&self) -> TransferCounts {
        TransferCounts {
            total_codewords: self.total_codewords,
            retransmissions: self.retransmissions,
        }
    }

    pub fn loss_fraction(&self) -> f64 {
        self.counts().loss_fraction()
    }
}

fn check_compatible(payload: &Payload, mapping: &PriorityMapping, code: &CodeSpec) -> Result<()> {
    if mapping.k_info() != code.k_info() || mapping.payload_capacity != code.payload_capacity() {
        return Err(Error::Mapping("mapping was built for a different code".into()));
    }
    match (payload, mapping.layout) {
        (Payload::WebPage(p), Layout::WebPage { ratio, .. }) if p.ratio == ratio => Ok(()),
        (Payload::Gop(g), Layout::Video { .. }) if g.p_frames.len() == P_FRAMES => Ok(()),
        _ => Err(Error::Mapping("payload does not match the mapping layout".into())),
    }
}

/// Sends `payload` and retransmits each codeword until the mapping's
/// protected positions decode correctly (checked against the sent bits).
/// Noise for attempt `a` of codeword `c` comes from substream
/// `(cfg.rng_seed, stream, c, a)`.
pub fn simulate_transfer(
    payload: &Payload,
    mapping: &PriorityMapping,
    code: &CodeSpec,
    cfg: &ChannelConfig,
    dec: &DecoderConfig,
    stream: u64,
) -> Result<TransferStats> {
    let policies = [mapping.protected.as_slice()];
    let mut out = simulate_transfer_policies(payload, mapping, &policies, code, cfg, dec, stream)?;
    Ok(out.remove(0))
}

/// Runs several protection policies over the same layout on shared noise:
/// attempt `a` of a codeword is decoded once and judged by every policy
/// still waiting on it, so the policies see paired realizations.
pub fn simulate_transfer_policies(
    payload: &Payload,
    mapping: &PriorityMapping,
    policies: &[&[bool]],
    code: &CodeSpec,
    cfg: &ChannelConfig,
    dec: &DecoderConfig,
    stream: u64,
) -> Result<Vec<TransferStats>> {
    check_compatible(payload, mapping, code)?;
    cfg.validate()?;
    if let Some(bad) = policies.iter().find(|p| p.len() != mapping.k_info()) {
        return Err(Error::LengthMismatch {
            expected: mapping.k_info(),
            actual: bad.len(),
        });
    }
    let watched: Vec<Vec<usize>> = policies
        .iter()
        .map(|p| (0..p.len()).filter(|&i| p[i]).collect())
        .collect();
    let chunks = payload.chunks();
    let cap = code.payload_capacity();
    let mut received = vec![Vec::with_capacity(chunks.len()); policies.len()];
    let mut retrans = vec![0u64; policies.len()];
    for (c, chunk) in chunks.iter().enumerate() {
        let info = code.info_bits(&mapping.pack(chunk))?;
        let cw = code.encode_info(&info)?;
        let mut pending: Vec<usize> = (0..policies.len()).collect();
        let mut attempt = 0u64;
        while !pending.is_empty() {
            let mut rng = substream(cfg.rng_seed, &[TRANSFER_STREAM, stream, c as u64, attempt]);
            let decoded = code.decode(&transmit(&cw, cfg, &mut rng), dec)?;
            attempt += 1;
            let give_up = attempt >= MAX_ATTEMPTS;
            pending.retain(|&p| {
                let clean = watched[p].iter().all(|&i| decoded.info[i] == info[i]);
                if clean || give_up {
                    received[p].push(mapping.unpack(&decoded.info[..cap], chunk));
                    false
                } else {
                    retrans[p] += 1;
                    true
                }
            });
        }
    }
    received
        .into_iter()
        .zip(retrans)
        .map(|(chunks_rx, r)| {
            Ok(TransferStats {
                total_codewords: chunks.len() as u64,
                retransmissions: r,
                received: payload.from_chunks(&chunks_rx)?,
            })
        })
        .collect()
}

fn scoreable(img: &GrayImage) -> bool {
    scale_count(img.width(), img.height()) > 0
}

/// MS-SSIM of the received media against what was sent: the page image, or
/// the mean over the GOP's reconstructed frames. `None` when the image is
/// too small to score.
pub fn received_quality(sent: &Payload, received: &Payload) -> Result<Option<f64>> {
    match (sent, received) {
        (Payload::WebPage(a), Payload::WebPage(b)) => {
            if !scoreable(&a.image) {
                return Ok(None);
            }
            ms_ssim(&a.image, &b.image).map(Some)
        }
        (Payload::Gop(a), Payload::Gop(b)) => {
            if !scoreable(&a.i_frame) {
                return Ok(None);
            }
            mean_ms_ssim(&a.reconstruct(), &b.reconstruct()).map(Some)
        }
        _ => Err(Error::Mapping("cannot compare a web page with a GOP".into())),
    }
}
