//! Multi-scale structural similarity (MS-SSIM) for 8-bit grayscale images.
//!
//! Statistics use an 11x11 Gaussian window (sigma 1.5) over the valid region
//! only; each coarser scale is a 2x2 box average of the previous one. The
//! five canonical scale weights are used when the image is large enough;
//! smaller images use as many scales as keep the window inside the image and
//! renormalize the leading weights to sum to one. Negative contrast-structure
//! terms are clamped to zero.

use super::image::GrayImage;
use crate::error::{Error, Result};

pub const SCALE_WEIGHTS: [f64; 5] = [0.0448, 0.2856, 0.3001, 0.2363, 0.1333];
pub const WINDOW: usize = 11;
const SIGMA: f64 = 1.5;
const K1: f64 = 0.01;
const K2: f64 = 0.03;
const DYNAMIC_RANGE: f64 = 255.0;

struct Plane {
    w: usize,
    h: usize,
    v: Vec<f64>,
}

impl Plane {
    fn from_image(img: &GrayImage) -> Self {
        Plane {
            w: img.width(),
            h: img.height(),
            v: img.pixels().iter().map(|&p| p as f64).collect(),
        }
    }

    fn downsample(&self) -> Plane {
        let (w, h) = (self.w / 2, self.h / 2);
        let mut v = Vec::with_capacity(w * h);
        for y in 0..h {
            for x in 0..w {
                let i = 2 * y * self.w + 2 * x;
                v.push(0.25 * (self.v[i] + self.v[i + 1] + self.v[i + self.w] + self.v[i + self.w + 1]));
            }
        }
        Plane { w, h, v }
    }

    fn product(&self, other: &Plane) -> Plane {
        Plane {
            w: self.w,
            h: self.h,
            v: self.v.iter().zip(&other.v).map(|(a, b)| a * b).collect(),
        }
    }

    /// Separable Gaussian filtering, valid region only.
    fn filter(&self, kernel: &[f64]) -> Plane {
        let k = kernel.len();
        let (ow, oh) = (self.w + 1 - k, self.h + 1 - k);
        let mut rows = vec![0.0; ow * self.h];
        for y in 0..self.h {
            let line = &self.v[y * self.w..(y + 1) * self.w];
            for x in 0..ow {
                rows[y * ow + x] = kernel.iter().zip(&line[x..x + k]).map(|(a, b)| a * b).sum();
            }
        }
        let mut v = vec![0.0; ow * oh];
        for y in 0..oh {
            for x in 0..ow {
                v[y * ow + x] = kernel
                    .iter()
                    .enumerate()
                    .map(|(j, a)| a * rows[(y + j) * ow + x])
                    .sum();
            }
        }
        Plane { w: ow, h: oh, v }
    }
}

fn gaussian_kernel() -> Vec<f64> {
    let c = (WINDOW / 2) as f64;
    let k: Vec<f64> = (0..WINDOW)
        .map(|i| (-((i as f64 - c).powi(2)) / (2.0 * SIGMA * SIGMA)).exp())
        .collect();
    let s: f64 = k.iter().sum();
    k.into_iter().map(|x| x / s).collect()
}

/// Mean luminance and contrast-structure terms at one scale.
fn ssim_terms(a: &Plane, b: &Plane, kernel: &[f64]) -> (f64, f64) {
    let c1 = (K1 * DYNAMIC_RANGE).powi(2);
    let c2 = (K2 * DYNAMIC_RANGE).powi(2);
    let mu_a = a.filter(kernel);
    let mu_b = b.filter(kernel);
    let aa = a.product(a).filter(kernel);
    let bb = b.product(b).filter(kernel);
    let ab = a.product(b).filter(kernel);
    let n = mu_a.v.len() as f64;
    let (mut lum, mut cs) = (0.0, 0.0);
    for i in 0..mu_a.v.len() {
        let (ma, mb) = (mu_a.v[i], mu_b.v[i]);
        let va = aa.v[i] - ma * ma;
        let vb = bb.v[i] - mb * mb;
        let cov = ab.v[i] - ma * mb;
        lum += (2.0 * ma * mb + c1) / (ma * ma + mb * mb + c1);
        cs += (2.0 * cov + c2) / (va + vb + c2);
    }
    (lum / n, cs / n)
}

/// Number of scales used for an image of this size.
pub fn scale_count(width: usize, height: usize) -> usize {
    let mut d = width.min(height);
    let mut n = 0;
    while n < SCALE_WEIGHTS.len() && d >= WINDOW {
        n += 1;
        d /= 2;
    }
    n
}

/// MS-SSIM score in `[0, 1]`; symmetric in its arguments.
pub fn ms_ssim(reference: &GrayImage, received: &GrayImage) -> Result<f64> {
    if reference.width() != received.width() || reference.height() != received.height() {
        return Err(Error::Image(format!(
            "dimension mismatch: {}x{} vs {}x{}",
            reference.width(),
            reference.height(),
            received.width(),
            received.height()
        )));
    }
    let scales = scale_count(reference.width(), reference.height());
    if scales == 0 {
        return Err(Error::Image(format!(
            "images smaller than {WINDOW}x{WINDOW} cannot be scored"
        )));
    }
    let total: f64 = SCALE_WEIGHTS[..scales].iter().sum();
    let kernel = gaussian_kernel();
    let mut a = Plane::from_image(reference);
    let mut b = Plane::from_image(received);
    let mut score = 1.0;
    for (s, w) in SCALE_WEIGHTS[..scales].iter().enumerate() {
        let w = w / total;
        let (lum, cs) = ssim_terms(&a, &b, &kernel);
        score *= cs.max(0.0).powf(w);
        if s + 1 == scales {
            score *= lum.max(0.0).powf(w);
        } else {
            a = a.downsample();
            b = b.downsample();
        }
    }
    Ok(score.clamp(0.0, 1.0))
}

/// Mean MS-SSIM over paired frame sequences.
pub fn mean_ms_ssim(reference: &[GrayImage], received: &[GrayImage]) -> Result<f64> {
    if reference.len() != received.len() || reference.is_empty() {
        return Err(Error::Image(format!(
            "cannot compare {} frames with {}",
            reference.len(),
            received.len()
        )));
    }
    let mut sum = 0.0;
    for (a, b) in reference.iter().zip(received) {
        sum += ms_ssim(a, b)?;
    }
    Ok(sum / reference.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scale_counts() {
        assert_eq!(scale_count(256, 256), 5);
        assert_eq!(scale_count(176, 300), 5);
        assert_eq!(scale_count(175, 300), 4);
        assert_eq!(scale_count(32, 32), 2);
        assert_eq!(scale_count(10, 100), 0);
    }

    #[test]
    fn kernel_is_normalized_and_symmetric() {
        let k = gaussian_kernel();
        assert!((k.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert_eq!(k[0], k[10]);
    }

    #[test]
    fn identical_and_mismatched() {
        let a = GrayImage::test_pattern(64, 48);
        assert!((ms_ssim(&a, &a).unwrap() - 1.0).abs() < 1e-12);
        let b = GrayImage::test_pattern(48, 64);
        assert!(ms_ssim(&a, &b).is_err());
        let tiny = GrayImage::test_pattern(8, 8);
        assert!(ms_ssim(&tiny, &tiny).is_err());
    }

    #[test]
    fn inverted_image_scores_low() {
        let a = GrayImage::test_pattern(64, 64);
        let b = GrayImage::from_fn(64, 64, |x, y| 255 - a.get(x, y));
        assert!(ms_ssim(&a, &b).unwrap() < 0.2);
    }
}
