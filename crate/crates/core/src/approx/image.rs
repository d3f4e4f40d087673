//! 8-bit grayscale images and binary PGM (P5) I/O.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        if pixels.len() != width * height {
            return Err(Error::Image(format!(
                "{width}x{height} image needs {} pixels, got {}",
                width * height,
                pixels.len()
            )));
        }
        Ok(GrayImage { width, height, pixels })
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> u8) -> Self {
        let mut pixels = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                pixels.push(f(x, y));
            }
        }
        GrayImage { width, height, pixels }
    }

    /// A deterministic test card: gradients, discs, stripes and a fine
    /// texture, so that both coarse and fine scales carry structure.
    pub fn test_pattern(width: usize, height: usize) -> Self {
        let (w, h) = (width as f64, height as f64);
        GrayImage::from_fn(width, height, |x, y| {
            let (u, v) = (x as f64 / w, y as f64 / h);
            let mut val = 60.0 + 120.0 * u + 40.0 * (v * std::f64::consts::PI).sin();
            let d1 = ((u - 0.3).powi(2) + (v - 0.35).powi(2)).sqrt();
            if d1 < 0.18 {
                val = 230.0 - 200.0 * d1;
            }
            let d2 = ((u - 0.72).powi(2) + (v - 0.7).powi(2)).sqrt();
            if d2 < 0.15 {
                val *= 0.35;
            }
            if (0.55..0.9).contains(&u) && (0.1..0.4).contains(&v) {
                val = if (x / 4 + y / 4) % 2 == 0 { 200.0 } else { 50.0 };
            }
            val += 12.0 * ((x as f64 * 0.9).sin() * (y as f64 * 1.3).cos());
            val.round().clamp(0.0, 255.0) as u8
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn pixels_mut(&mut self) -> &mut [u8] {
        &mut self.pixels
    }

    pub fn into_pixels(self) -> Vec<u8> {
        self.pixels
    }

    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.pixels[y * self.width + x]
    }

    pub fn crop(&self, x0: usize, y0: usize, width: usize, height: usize) -> Result<Self> {
        if x0 + width > self.width || y0 + height > self.height {
            return Err(Error::Image(format!(
                "crop {width}x{height}+{x0}+{y0} exceeds {}x{}",
                self.width, self.height
            )));
        }
        Ok(GrayImage::from_fn(width, height, |x, y| self.get(x0 + x, y0 + y)))
    }

    /// Box-filter downscale by an integer factor.
    pub fn downscale(&self, factor: usize) -> Result<Self> {
        if factor == 0 || self.width < factor || self.height < factor {
            return Err(Error::Image(format!("cannot downscale by {factor}")));
        }
        let area = (factor * factor) as u32;
        Ok(GrayImage::from_fn(self.width / factor, self.height / factor, |x, y| {
            let mut sum = 0u32;
            for dy in 0..factor {
                for dx in 0..factor {
                    sum += self.get(x * factor + dx, y * factor + dy) as u32;
                }
            }
            ((sum + area / 2) / area) as u8
        }))
    }

    pub fn to_pgm(&self) -> Vec<u8> {
        let mut out = format!("P5\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend_from_slice(&self.pixels);
        out
    }

    pub fn from_pgm(data: &[u8]) -> Result<Self> {
        let mut pos = 0;
        let mut fields = Vec::with_capacity(4);
        while fields.len() < 4 {
            while pos < data.len() && data[pos].is_ascii_whitespace() {
                pos += 1;
            }
            if pos < data.len() && data[pos] == b'#' {
                while pos < data.len() && data[pos] != b'\n' {
                    pos += 1;
                }
                continue;
            }
            let start = pos;
            while pos < data.len() && !data[pos].is_ascii_whitespace() {
                pos += 1;
            }
            if start == pos {
                return Err(Error::Image("truncated PGM header".into()));
            }
            fields.push(String::from_utf8_lossy(&data[start..pos]).into_owned());
        }
        if fields[0] != "P5" {
            return Err(Error::Image(format!("unsupported PGM magic {:?}", fields[0])));
        }
        let num = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| Error::Image(format!("bad PGM header field {s:?}")))
        };
        let (width, height, maxval) = (num(&fields[1])?, num(&fields[2])?, num(&fields[3])?);
        if maxval != 255 {
            return Err(Error::Image(format!("only 8-bit PGM is supported, maxval {maxval}")));
        }
        // Exactly one whitespace byte separates the header from the raster.
        pos += 1;
        let raster = data.get(pos..pos + width * height).ok_or_else(|| {
            Error::Image(format!("PGM raster shorter than {width}x{height}"))
        })?;
        GrayImage::new(width, height, raster.to_vec())
    }

    pub fn read_pgm(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let data = fs::read(path).map_err(|e| match e.kind() {
            std::io::ErrorKind::NotFound => Error::MissingFile(path.to_path_buf()),
            _ => Error::Io(e),
        })?;
        GrayImage::from_pgm(&data)
    }

    pub fn write_pgm(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.to_pgm())?;
        Ok(())
    }
}
