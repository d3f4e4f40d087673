//! Assignment of payload roles to information positions.

use serde::{Deserialize, Serialize};

use super::payload::{Chunk, Ratio, P_FRAMES, PAYLOAD_BUDGET, PIXELS_PER_FRAME_CHUNK};
use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::fec::CodeSpec;
use crate::uep::{protection_order, BitErrorProfile};

/// What an information position carries. Indices are local to one codeword.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SlotRole {
    Text(usize),
    /// Bit `bit` (0 = MSB) of pixel `pixel`.
    PixelBit { pixel: usize, bit: u8 },
    /// Bit of the I-frame samples.
    IFrame(usize),
    /// Bit of P-frame `frame` (1-based) samples.
    PFrame { frame: usize, bit: usize },
    Crc,
    Pad,
}

impl SlotRole {
    pub fn is_data(&self) -> bool {
        !matches!(self, SlotRole::Crc | SlotRole::Pad)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Layout {
    WebPage { ratio: Ratio, quality_level: u8 },
    Video { protected_pframes: usize },
}

/// Role of every information position plus the positions whose errors
/// trigger a retransmission.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PriorityMapping {
    pub layout: Layout,
    /// Indexed by information position.
    pub roles: Vec<SlotRole>,
    pub protected: Vec<bool>,
    pub payload_capacity: usize,
}

enum Source {
    Text(usize),
    Byte { index: usize, bit: usize },
}

fn source(role: SlotRole) -> Option<Source> {
    let frame_bits = 8 * PIXELS_PER_FRAME_CHUNK;
    match role {
        SlotRole::Text(i) => Some(Source::Text(i)),
        SlotRole::PixelBit { pixel, bit } => Some(Source::Byte { index: pixel, bit: bit as usize }),
        SlotRole::IFrame(b) => Some(Source::Byte { index: b / 8, bit: b % 8 }),
        SlotRole::PFrame { frame, bit } => Some(Source::Byte {
            index: (frame * frame_bits + bit) / 8,
            bit: bit % 8,
        }),
        SlotRole::Crc | SlotRole::Pad => None,
    }
}

/// Places `data` roles on the most protected payload-capable positions;
/// leftover capable positions are padding and the rest carry the CRC.
fn place(code: &CodeSpec, profile: &BitErrorProfile, data: Vec<SlotRole>) -> Result<Vec<SlotRole>> {
    if profile.k_info != code.k_info() {
        return Err(Error::Mapping(format!(
            "profile covers {} positions but the code has K={}",
            profile.k_info,
            code.k_info()
        )));
    }
    let cap = code.payload_capacity();
    if data.len() > cap {
        return Err(Error::Mapping(format!(
            "{} payload bits exceed the code's capacity of {cap}",
            data.len()
        )));
    }
    let mut roles = vec![SlotRole::Crc; code.k_info()];
    roles[..cap].fill(SlotRole::Pad);
    let capable = protection_order(profile).into_iter().filter(|&i| i < cap);
    for (pos, role) in capable.zip(data) {
        roles[pos] = role;
    }
    Ok(roles)
}

/// Text on the most protected positions, then image bits plane by plane:
/// every pixel's MSB, then every pixel's next bit, and so on. Text and the
/// first `quality_level` bit planes are protected.
pub fn build_webpage_mapping(
    code: &CodeSpec,
    profile: &BitErrorProfile,
    ratio: Ratio,
    quality_level: u8,
) -> Result<PriorityMapping> {
    ratio.validate()?;
    if quality_level > 8 {
        return Err(Error::Mapping(format!("quality level {quality_level} is above 8")));
    }
    let mut data: Vec<SlotRole> = (0..ratio.text).map(SlotRole::Text).collect();
    for bit in 0..8u8 {
        data.extend((0..ratio.pixels()).map(|pixel| SlotRole::PixelBit { pixel, bit }));
    }
    let roles = place(code, profile, data)?;
    let protected = roles
        .iter()
        .map(|r| match *r {
            SlotRole::Text(_) => true,
            SlotRole::PixelBit { bit, .. } => bit < quality_level,
            _ => false,
        })
        .collect();
    Ok(PriorityMapping {
        layout: Layout::WebPage { ratio, quality_level },
        roles,
        protected,
        payload_capacity: code.payload_capacity(),
    })
}

/// I-frame samples on the most protected positions, then P-frames 1..14 in
/// decreasing protection. The I-frame and the first `protected_pframes`
/// P-frames are protected.
pub fn build_video_mapping(
    code: &CodeSpec,
    profile: &BitErrorProfile,
    protected_pframes: usize,
) -> Result<PriorityMapping> {
    if protected_pframes > P_FRAMES {
        return Err(Error::Mapping(format!(
            "{protected_pframes} protected P-frames requested, only {P_FRAMES} exist"
        )));
    }
    let frame_bits = 8 * PIXELS_PER_FRAME_CHUNK;
    let mut data: Vec<SlotRole> = (0..frame_bits).map(SlotRole::IFrame).collect();
    for frame in 1..=P_FRAMES {
        data.extend((0..frame_bits).map(|bit| SlotRole::PFrame { frame, bit }));
    }
    debug_assert!(data.len() <= PAYLOAD_BUDGET);
    let roles = place(code, profile, data)?;
    let protected = roles
        .iter()
        .map(|r| match *r {
            SlotRole::IFrame(_) => true,
            SlotRole::PFrame { frame, .. } => frame <= protected_pframes,
            _ => false,
        })
        .collect();
    Ok(PriorityMapping {
        layout: Layout::Video { protected_pframes },
        roles,
        protected,
        payload_capacity: code.payload_capacity(),
    })
}

impl PriorityMapping {
    pub fn k_info(&self) -> usize {
        self.roles.len()
    }

    /// Protection flags with every data slot protected.
    pub fn full_protection(&self) -> Vec<bool> {
        self.roles.iter().map(SlotRole::is_data).collect()
    }

    pub fn protected_count(&self) -> usize {
        self.protected.iter().filter(|&&p| p).count()
    }

    /// Information positions whose role satisfies `pred`, ascending.
    pub fn positions_where(&self, pred: impl Fn(&SlotRole) -> bool) -> Vec<usize> {
        (0..self.roles.len()).filter(|&i| pred(&self.roles[i])).collect()
    }

    /// The code payload (length `payload_capacity`) carrying `chunk`.
    pub fn pack(&self, chunk: &Chunk) -> Bits {
        let mut out = vec![0u8; self.payload_capacity];
        for (pos, role) in self.roles[..self.payload_capacity].iter().enumerate() {
            out[pos] = match source(*role) {
                Some(Source::Text(i)) => chunk.text[i],
                Some(Source::Byte { index, bit }) => (chunk.bytes[index] >> (7 - bit)) & 1,
                None => 0,
            };
        }
        Bits(out)
    }

    /// Inverse of [`pack`](Self::pack) given the chunk shape to fill.
    pub fn unpack(&self, payload: &[u8], shape: &Chunk) -> Chunk {
        let mut out = Chunk {
            text: vec![0; shape.text.len()],
            bytes: vec![0; shape.bytes.len()],
        };
        for (pos, role) in self.roles[..self.payload_capacity].iter().enumerate() {
            match source(*role) {
                Some(Source::Text(i)) => out.text[i] = payload[pos],
                Some(Source::Byte { index, bit }) => out.bytes[index] |= payload[pos] << (7 - bit),
                None => {}
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fec::{construct_polar_code, CodeKind};

    fn polar() -> CodeSpec {
        construct_polar_code(64, 40, 2.0, 4).unwrap().into()
    }

    fn descending_profile(k: usize) -> BitErrorProfile {
        // Later positions are more reliable.
        let counts = (0..k as u64).rev().collect();
        BitErrorProfile::new(CodeKind::Polar, 2.0, 1000, counts).unwrap()
    }

    #[test]
    fn places_data_on_capable_positions_only() {
        // A toy code cannot hold 500 payload bits.
        assert!(build_video_mapping(&polar(), &descending_profile(40), 0).is_err());
    }

    #[test]
    fn pack_unpack_round_trip() {
        let code = CodeSpec::standard(CodeKind::Polar).unwrap();
        let prof = BitErrorProfile::new(CodeKind::Polar, 2.0, 1, vec![0; 512]).unwrap();
        let m = build_webpage_mapping(&code, &prof, Ratio::new(100, 400).unwrap(), 1).unwrap();
        let chunk = Chunk {
            text: (0..100).map(|i| (i % 3 == 0) as u8).collect(),
            bytes: (0..50).map(|i| (i * 37) as u8).collect(),
        };
        let packed = m.pack(&chunk);
        assert_eq!(packed.len(), 500);
        assert_eq!(m.unpack(&packed, &chunk), chunk);
        assert_eq!(m.protected_count(), 150);
        assert!(m.roles[500..].iter().all(|r| *r == SlotRole::Crc));
    }
}
