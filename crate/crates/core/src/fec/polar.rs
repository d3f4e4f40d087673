//! Polar code construction and encoding.
//!
//! Codewords are `x = u · F^{⊗m}` in natural (non bit-reversed) index order
//! with kernel `F = [[1, 0], [1, 1]]`. The K information positions carry the
//! payload followed by its CRC, in ascending index order; all other positions
//! are frozen to zero.

use serde::{Deserialize, Serialize};

use super::crc::Crc;
use super::scl::ListDecoder;
use crate::bits::{Bits, Llrs};
use crate::error::{Error, Result};

/// How bit-channel reliabilities are estimated at construction time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Construction {
    #[default]
    Bhattacharyya,
    GaussianApproximation,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolarCodeSpec {
    pub n_total: usize,
    pub k_info: usize,
    /// Sorted ascending.
    pub frozen_set: Vec<usize>,
    /// All N indices, most reliable first.
    pub reliability_order: Vec<usize>,
    pub crc_len: usize,
    /// CRC generator in normal form (see [`Crc`]).
    pub crc_poly: u32,
    pub design_ebno_db: f64,
    #[serde(default)]
    pub construction: Construction,
}

/// Result of CRC-aided list decoding.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarDecoded {
    /// All K information bits (payload followed by CRC).
    pub info: Bits,
    pub crc_pass: bool,
}

impl PolarDecoded {
    pub fn payload(&self, crc_len: usize) -> Bits {
        Bits(self.info[..self.info.len() - crc_len].to_vec())
    }
}

fn ln_minus(lz: f64) -> f64 {
    // 2z - z^2 = 1 - (1 - z)^2, evaluated without cancellation near z = 1.
    let d = -lz.exp_m1();
    if d < 0.5 {
        (-d * d).ln_1p()
    } else {
        lz + (2.0 - lz.exp()).ln()
    }
}

/// Bhattacharyya parameters (natural log) of the N synthetic channels.
fn bhattacharyya_log(m: u32, rate: f64, ebno_db: f64) -> Vec<f64> {
    let ebno = 10f64.powf(ebno_db / 10.0);
    let mut z = vec![-(rate * ebno)];
    for _ in 0..m {
        let mut next = Vec::with_capacity(z.len() * 2);
        for &lz in &z {
            next.push(ln_minus(lz));
            next.push(2.0 * lz);
        }
        z = next;
    }
    z
}

fn ga_phi(x: f64) -> f64 {
    if x <= 0.0 {
        1.0
    } else if x < 10.0 {
        (-0.4527 * x.powf(0.86) + 0.0218).exp()
    } else {
        (std::f64::consts::PI / x).sqrt() * (-x / 4.0).exp() * (1.0 - 10.0 / (7.0 * x))
    }
}

fn ga_phi_inv(y: f64) -> f64 {
    // phi is decreasing on [0, inf); bisect.
    let (mut lo, mut hi) = (0.0, 1.0);
    while ga_phi(hi) > y {
        hi *= 2.0;
        if hi > 1e6 {
            return hi;
        }
    }
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if ga_phi(mid) > y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Mean LLR of each synthetic channel under the Gaussian approximation.
/// Returned negated so that smaller means more reliable, like Bhattacharyya.
fn gaussian_approx_scores(m: u32, rate: f64, ebno_db: f64) -> Vec<f64> {
    let ebno = 10f64.powf(ebno_db / 10.0);
    let sigma2 = 1.0 / (2.0 * rate * ebno);
    let mut mu = vec![2.0 / sigma2];
    for _ in 0..m {
        let mut next = Vec::with_capacity(mu.len() * 2);
        for &v in &mu {
            let p = ga_phi(v);
            next.push(ga_phi_inv(1.0 - (1.0 - p) * (1.0 - p)));
            next.push(2.0 * v);
        }
        mu = next;
    }
    mu.into_iter().map(|v| -v).collect()
}

/// Builds a polar code whose K information positions are the most reliable
/// synthetic channels at `design_ebno_db`.
pub fn construct_polar_code(
    n_total: usize,
    k_info: usize,
    design_ebno_db: f64,
    crc_len: usize,
) -> Result<PolarCodeSpec> {
    construct_polar_code_with(
        n_total,
        k_info,
        design_ebno_db,
        crc_len,
        Crc::default_for_len(crc_len).poly,
        Construction::Bhattacharyya,
    )
}

pub fn construct_polar_code_with(
    n_total: usize,
    k_info: usize,
    design_ebno_db: f64,
    crc_len: usize,
    crc_poly: u32,
    construction: Construction,
) -> Result<PolarCodeSpec> {
    if n_total < 2 || !n_total.is_power_of_two() {
        return Err(Error::InvalidCode(format!(
            "polar length {n_total} is not a power of two >= 2"
        )));
    }
    if k_info == 0 || k_info > n_total {
        return Err(Error::InvalidCode(format!(
            "information length {k_info} must be in 1..={n_total}"
        )));
    }
    if crc_len >= k_info || crc_len > 32 {
        return Err(Error::InvalidCode(format!(
            "crc length {crc_len} must be below K={k_info} and at most 32"
        )));
    }
    if !design_ebno_db.is_finite() {
        return Err(Error::InvalidCode("design Eb/No must be finite".into()));
    }
    let m = n_total.trailing_zeros();
    let rate = k_info as f64 / n_total as f64;
    let scores = match construction {
        Construction::Bhattacharyya => bhattacharyya_log(m, rate, design_ebno_db),
        Construction::GaussianApproximation => gaussian_approx_scores(m, rate, design_ebno_db),
    };
    let mut order: Vec<usize> = (0..n_total).collect();
    // Ties go to the higher index, which is never less reliable under the
    // partial order of polarization.
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]).then(b.cmp(&a)));
    let mut frozen_set = order[k_info..].to_vec();
    frozen_set.sort_unstable();
    Ok(PolarCodeSpec {
        n_total,
        k_info,
        frozen_set,
        reliability_order: order,
        crc_len,
        crc_poly: Crc::new(crc_len, crc_poly).poly,
        design_ebno_db,
        construction,
    })
}

/// In-place `x <- x · F^{⊗m}` over GF(2).
pub fn polar_transform(x: &mut [u8]) {
    let n = x.len();
    let mut half = 1;
    while half < n {
        for block in (0..n).step_by(2 * half) {
            for i in block..block + half {
                x[i] ^= x[i + half];
            }
        }
        half *= 2;
    }
}

impl PolarCodeSpec {
    pub fn payload_len(&self) -> usize {
        self.k_info - self.crc_len
    }

    pub fn crc(&self) -> Crc {
        Crc::new(self.crc_len, self.crc_poly)
    }

    /// Frozen indicator per codeword index.
    pub fn frozen_mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.n_total];
        for &i in &self.frozen_set {
            mask[i] = true;
        }
        mask
    }

    /// Information positions in ascending index order.
    pub fn info_positions(&self) -> Vec<usize> {
        let mask = self.frozen_mask();
        (0..self.n_total).filter(|&i| !mask[i]).collect()
    }

    /// Appends the CRC to `payload`, giving the K information bits.
    pub fn attach_crc(&self, payload: &[u8]) -> Result<Bits> {
        if payload.len() != self.payload_len() {
            return Err(Error::LengthMismatch {
                expected: self.payload_len(),
                actual: payload.len(),
            });
        }
        let mut info = payload.to_vec();
        info.resize(self.k_info, 0);
        let split = self.payload_len();
        let (msg, tail) = info.split_at_mut(split);
        self.crc().write(msg, tail);
        Ok(Bits(info))
    }

    /// Encodes all K information bits (CRC already attached).
    pub fn encode_info(&self, info: &[u8]) -> Result<Bits> {
        if info.len() != self.k_info {
            return Err(Error::LengthMismatch {
                expected: self.k_info,
                actual: info.len(),
            });
        }
        let mut u = vec![0u8; self.n_total];
        for (pos, &b) in self.info_positions().into_iter().zip(info) {
            u[pos] = b;
        }
        polar_transform(&mut u);
        Ok(Bits(u))
    }

    /// Encodes a payload of K - crc_len bits into an N-bit codeword.
    pub fn encode(&self, payload: &[u8]) -> Result<Bits> {
        let info = self.attach_crc(payload)?;
        self.encode_info(&info)
    }

    /// CRC-aided successive-cancellation list decoding.
    pub fn decode(&self, llrs: &Llrs, list_size: usize) -> Result<PolarDecoded> {
        if llrs.len() != self.n_total {
            return Err(Error::LengthMismatch {
                expected: self.n_total,
                actual: llrs.len(),
            });
        }
        if list_size == 0 {
            return Err(Error::InvalidArgument("list size must be at least 1".into()));
        }
        Ok(ListDecoder::new(self, list_size).decode(llrs))
    }
}

/// Free-function form of [`PolarCodeSpec::encode`].
pub fn polar_encode(spec: &PolarCodeSpec, payload: &[u8]) -> Result<Bits> {
    spec.encode(payload)
}

/// Free-function form of [`PolarCodeSpec::decode`].
pub fn polar_decode_cascl(
    spec: &PolarCodeSpec,
    llrs: &Llrs,
    list_size: usize,
) -> Result<(Bits, bool)> {
    let d = spec.decode(llrs, list_size)?;
    Ok((d.payload(spec.crc_len), d.crc_pass))
}
