//! Web-page and GOP payloads and their split into per-codeword chunks.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::image::GrayImage;
use crate::bits::Bits;
use crate::error::{Error, Result};

/// Payload bits carried by every codeword.
pub const PAYLOAD_BUDGET: usize = 500;
/// P-frames following the I-frame in a group of pictures.
pub const P_FRAMES: usize = 14;
/// Pixels of every frame packed into one codeword.
pub const PIXELS_PER_FRAME_CHUNK: usize = 4;

/// Text and image bits per codeword, written `text:image`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Ratio {
    pub text: usize,
    pub image: usize,
}

impl Ratio {
    pub fn new(text: usize, image: usize) -> Result<Self> {
        let r = Ratio { text, image };
        r.validate()?;
        Ok(r)
    }

    pub fn validate(&self) -> Result<()> {
        if self.text + self.image != PAYLOAD_BUDGET {
            return Err(Error::Mapping(format!(
                "ratio {self} does not fill the {PAYLOAD_BUDGET}-bit payload budget"
            )));
        }
        if self.image % 8 != 0 {
            return Err(Error::Mapping(format!(
                "image share of {self} is not a whole number of pixels"
            )));
        }
        Ok(())
    }

    pub fn pixels(&self) -> usize {
        self.image / 8
    }

    /// Fraction of payload bits that are text.
    pub fn text_fraction(&self) -> f64 {
        self.text as f64 / (self.text + self.image) as f64
    }

    /// The eight sweep points 20:480, 60:440, ..., 300:200.
    pub fn sweep() -> Vec<Ratio> {
        (0..8)
            .map(|i| Ratio {
                text: 20 + 40 * i,
                image: PAYLOAD_BUDGET - 20 - 40 * i,
            })
            .collect()
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.text, self.image)
    }
}

impl FromStr for Ratio {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let (a, b) = s
            .split_once(':')
            .ok_or_else(|| Error::InvalidArgument(format!("ratio {s:?} is not text:image")))?;
        let parse = |x: &str| {
            x.trim()
                .parse::<usize>()
                .map_err(|_| Error::InvalidArgument(format!("ratio {s:?} is not text:image")))
        };
        Ratio::new(parse(a)?, parse(b)?)
    }
}

/// One codeword's worth of payload: text bits and bytes (pixels or frame
/// samples).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Chunk {
    pub text: Vec<u8>,
    pub bytes: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WebPagePayload {
    pub text_bits: Bits,
    pub image: GrayImage,
    pub ratio: Ratio,
}

impl WebPagePayload {
    pub fn new(text_bits: Bits, image: GrayImage, ratio: Ratio) -> Result<Self> {
        ratio.validate()?;
        if ratio.image == 0 && !image.pixels().is_empty() {
            return Err(Error::Mapping(format!("ratio {ratio} leaves no room for pixels")));
        }
        if ratio.text == 0 && !text_bits.is_empty() {
            return Err(Error::Mapping(format!("ratio {ratio} leaves no room for text")));
        }
        Ok(WebPagePayload { text_bits, image, ratio })
    }

    /// A page around `image` whose text fills the same number of codewords.
    pub fn with_random_text<R: Rng + ?Sized>(image: GrayImage, ratio: Ratio, rng: &mut R) -> Result<Self> {
        ratio.validate()?;
        if ratio.image == 0 {
            return Err(Error::Mapping(format!("ratio {ratio} leaves no room for pixels")));
        }
        let codewords = image.pixels().len().div_ceil(ratio.pixels());
        let text = Bits::random(codewords * ratio.text, rng);
        WebPagePayload::new(text, image, ratio)
    }

    pub fn codewords(&self) -> usize {
        let by_text = if self.ratio.text == 0 { 0 } else { self.text_bits.len().div_ceil(self.ratio.text) };
        let by_image = if self.ratio.image == 0 {
            0
        } else {
            self.image.pixels().len().div_ceil(self.ratio.pixels())
        };
        by_text.max(by_image)
    }

    pub fn size_bytes(&self) -> usize {
        self.text_bits.len().div_ceil(8) + self.image.pixels().len()
    }

    pub fn chunks(&self) -> Vec<Chunk> {
        let (t, p) = (self.ratio.text, self.ratio.pixels());
        (0..self.codewords())
            .map(|c| Chunk {
                text: padded(&self.text_bits, c * t, t),
                bytes: padded(self.image.pixels(), c * p, p),
            })
            .collect()
    }

    pub fn from_chunks(&self, chunks: &[Chunk]) -> Result<Self> {
        let text: Vec<u8> = chunks.iter().flat_map(|c| c.text.iter().copied()).collect();
        let pixels: Vec<u8> = chunks.iter().flat_map(|c| c.bytes.iter().copied()).collect();
        if text.len() < self.text_bits.len() || pixels.len() < self.image.pixels().len() {
            return Err(Error::Mapping("received chunks are shorter than the page".into()));
        }
        let image = GrayImage::new(
            self.image.width(),
            self.image.height(),
            pixels[..self.image.pixels().len()].to_vec(),
        )?;
        Ok(WebPagePayload {
            text_bits: Bits(text[..self.text_bits.len()].to_vec()),
            image,
            ratio: self.ratio,
        })
    }
}

fn padded(src: &[u8], start: usize, len: usize) -> Vec<u8> {
    let mut out: Vec<u8> = src.iter().skip(start).take(len).copied().collect();
    out.resize(len, 0);
    out
}

/// An I-frame followed by closed-loop difference frames.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GopPayload {
    pub i_frame: GrayImage,
    pub p_frames: Vec<Vec<i8>>,
}

impl GopPayload {
    /// Encodes `frames` (I-frame first). Each difference is taken against
    /// the previous reconstruction and clamped to the `i8` range, so
    /// decoding never drifts from what the sender predicts.
    pub fn from_frames(frames: &[GrayImage]) -> Result<Self> {
        let first = frames
            .first()
            .ok_or_else(|| Error::InvalidArgument("a GOP needs at least one frame".into()))?;
        let mut recon = first.pixels().to_vec();
        let mut p_frames = Vec::with_capacity(frames.len() - 1);
        for f in &frames[1..] {
            if f.width() != first.width() || f.height() != first.height() {
                return Err(Error::Image("all GOP frames must share dimensions".into()));
            }
            let diff: Vec<i8> = f
                .pixels()
                .iter()
                .zip(&recon)
                .map(|(&cur, &prev)| (cur as i32 - prev as i32).clamp(-128, 127) as i8)
                .collect();
            apply_diff(&mut recon, &diff);
            p_frames.push(diff);
        }
        Ok(GopPayload { i_frame: first.clone(), p_frames })
    }

    /// Frames obtained by shifting a window across `source`, one pixel to
    /// the right per frame.
    pub fn panning(source: &GrayImage, width: usize, height: usize, frames: usize) -> Result<Self> {
        let frames: Vec<GrayImage> = (0..frames)
            .map(|t| source.crop(t, 0, width, height))
            .collect::<Result<_>>()?;
        GopPayload::from_frames(&frames)
    }

    pub fn frame_count(&self) -> usize {
        1 + self.p_frames.len()
    }

    pub fn size_bytes(&self) -> usize {
        self.i_frame.pixels().len() * self.frame_count()
    }

    pub fn reconstruct(&self) -> Vec<GrayImage> {
        let mut out = vec![self.i_frame.clone()];
        let mut cur = self.i_frame.pixels().to_vec();
        for d in &self.p_frames {
            apply_diff(&mut cur, d);
            out.push(
                GrayImage::new(self.i_frame.width(), self.i_frame.height(), cur.clone())
                    .expect("frame dimensions are preserved"),
            );
        }
        out
    }

    pub fn codewords(&self) -> usize {
        self.i_frame.pixels().len().div_ceil(PIXELS_PER_FRAME_CHUNK)
    }

    /// Chunk bytes hold `PIXELS_PER_FRAME_CHUNK` samples of each frame in
    /// turn, I-frame first.
    pub fn chunks(&self) -> Vec<Chunk> {
        let q = PIXELS_PER_FRAME_CHUNK;
        (0..self.codewords())
            .map(|c| {
                let mut bytes = padded(self.i_frame.pixels(), c * q, q);
                for d in &self.p_frames {
                    let raw: Vec<u8> = d.iter().map(|&v| v as u8).collect();
                    bytes.extend(padded(&raw, c * q, q));
                }
                Chunk { text: Vec::new(), bytes }
            })
            .collect()
    }

    pub fn from_chunks(&self, chunks: &[Chunk]) -> Result<Self> {
        let q = PIXELS_PER_FRAME_CHUNK;
        let frames = self.frame_count();
        let n = self.i_frame.pixels().len();
        let mut streams = vec![Vec::with_capacity(n + q); frames];
        for c in chunks {
            if c.bytes.len() != frames * q {
                return Err(Error::Mapping("chunk does not match the GOP layout".into()));
            }
            for (f, s) in streams.iter_mut().enumerate() {
                s.extend_from_slice(&c.bytes[f * q..(f + 1) * q]);
            }
        }
        if streams[0].len() < n {
            return Err(Error::Mapping("received chunks are shorter than the GOP".into()));
        }
        let i_frame = GrayImage::new(self.i_frame.width(), self.i_frame.height(), streams[0][..n].to_vec())?;
        let p_frames = streams[1..]
            .iter()
            .map(|s| s[..n].iter().map(|&b| b as i8).collect())
            .collect();
        Ok(GopPayload { i_frame, p_frames })
    }
}

fn apply_diff(frame: &mut [u8], diff: &[i8]) {
    for (p, &d) in frame.iter_mut().zip(diff) {
        *p = (*p as i32 + d as i32).clamp(0, 255) as u8;
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Payload {
    WebPage(WebPagePayload),
    Gop(GopPayload),
}

impl Payload {
    pub fn chunks(&self) -> Vec<Chunk> {
        match self {
            Payload::WebPage(p) => p.chunks(),
            Payload::Gop(g) => g.chunks(),
        }
    }

    pub fn from_chunks(&self, chunks: &[Chunk]) -> Result<Payload> {
        Ok(match self {
            Payload::WebPage(p) => Payload::WebPage(p.from_chunks(chunks)?),
            Payload::Gop(g) => Payload::Gop(g.from_chunks(chunks)?),
        })
    }

    pub fn size_bytes(&self) -> usize {
        match self {
            Payload::WebPage(p) => p.size_bytes(),
            Payload::Gop(g) => g.size_bytes(),
        }
    }
}

impl From<WebPagePayload> for Payload {
    fn from(p: WebPagePayload) -> Self {
        Payload::WebPage(p)
    }
}

impl From<GopPayload> for Payload {
    fn from(g: GopPayload) -> Self {
        Payload::Gop(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::substream;

    #[test]
    fn ratio_parsing_and_sweep() {
        assert_eq!("100:400".parse::<Ratio>().unwrap(), Ratio { text: 100, image: 400 });
        assert!("100:300".parse::<Ratio>().is_err());
        assert!("101:399".parse::<Ratio>().is_err());
        let s = Ratio::sweep();
        assert_eq!(s.first().unwrap().to_string(), "20:480");
        assert_eq!(s.last().unwrap().to_string(), "300:200");
    }

    #[test]
    fn webpage_chunks_round_trip() {
        let img = GrayImage::test_pattern(13, 11);
        let ratio = Ratio::new(100, 400).unwrap();
        let page = WebPagePayload::with_random_text(img, ratio, &mut substream(1, &[])).unwrap();
        assert_eq!(page.codewords(), 143usize.div_ceil(50));
        let chunks = page.chunks();
        assert!(chunks.iter().all(|c| c.text.len() == 100 && c.bytes.len() == 50));
        assert_eq!(page.from_chunks(&chunks).unwrap(), page);
    }

    #[test]
    fn gop_reconstructs_source_frames() {
        let src = GrayImage::from_fn(40, 12, |x, y| (x * 5 + y * 3) as u8);
        let frames: Vec<GrayImage> = (0..15).map(|t| src.crop(t, 0, 16, 12).unwrap()).collect();
        let gop = GopPayload::from_frames(&frames).unwrap();
        assert_eq!(gop.p_frames.len(), P_FRAMES);
        assert_eq!(gop.reconstruct(), frames);
        let chunks = gop.chunks();
        assert_eq!(chunks.len(), 48);
        assert_eq!(gop.from_chunks(&chunks).unwrap(), gop);
    }

    #[test]
    fn clamped_differences_do_not_drift() {
        let a = GrayImage::new(1, 1, vec![0]).unwrap();
        let b = GrayImage::new(1, 1, vec![255]).unwrap();
        let gop = GopPayload::from_frames(&[a, b.clone(), b]).unwrap();
        let r = gop.reconstruct();
        assert_eq!(r[1].pixels(), &[127]);
        assert_eq!(r[2].pixels(), &[254]);
    }
}
