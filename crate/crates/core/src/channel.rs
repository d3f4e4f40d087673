//! BPSK over AWGN with LLR demapping.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::bits::Llrs;
use crate::error::{Error, Result};

/// LLR magnitude reported by a noiseless channel (`ebno_db = +inf`).
pub const NOISELESS_LLR: f64 = 1.0e3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelConfig {
    /// Eb/No in dB. `f64::INFINITY` gives a noiseless channel.
    pub ebno_db: f64,
    /// Code rate used to convert Eb/No into symbol SNR.
    pub code_rate: f64,
    pub rng_seed: u64,
}

impl ChannelConfig {
    pub fn new(ebno_db: f64, code_rate: f64, rng_seed: u64) -> Result<Self> {
        let cfg = ChannelConfig {
            ebno_db,
            code_rate,
            rng_seed,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn noiseless(code_rate: f64) -> Self {
        ChannelConfig {
            ebno_db: f64::INFINITY,
            code_rate,
            rng_seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.code_rate > 0.0 && self.code_rate <= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "code rate {} outside (0, 1]",
                self.code_rate
            )));
        }
        if self.ebno_db.is_nan() || self.ebno_db == f64::NEG_INFINITY {
            return Err(Error::InvalidArgument("Eb/No must be a number".into()));
        }
        Ok(())
    }

    pub fn is_noiseless(&self) -> bool {
        self.ebno_db == f64::INFINITY
    }

    /// Noise variance per real dimension for unit-energy BPSK:
    /// `1 / (2 R Eb/No)`.
    pub fn noise_variance(&self) -> f64 {
        if self.is_noiseless() {
            return 0.0;
        }
        1.0 / (2.0 * self.code_rate * 10f64.powf(self.ebno_db / 10.0))
    }
}

/// Maps 0 -> +1 and 1 -> -1, adds Gaussian noise, and returns `2y / σ²`.
///
/// Each noise sample is applied along its symbol's sign, `y = s(1 + σn)`.
/// Since the noise is symmetric this is the same channel as `y = s + σn`,
/// but a given noise stream now produces the same error pattern for every
/// codeword under a symmetric decoder, which pairs comparisons between
/// different payloads.
pub fn transmit<R: Rng + ?Sized>(bits: &[u8], cfg: &ChannelConfig, rng: &mut R) -> Llrs {
    if cfg.is_noiseless() {
        return Llrs::noiseless(bits, NOISELESS_LLR);
    }
    let var = cfg.noise_variance();
    let sigma = var.sqrt();
    let scale = 2.0 / var;
    Llrs(
        bits.iter()
            .map(|&b| {
                let s = if b == 0 { 1.0 } else { -1.0 };
                let n: f64 = rng.sample(StandardNormal);
                scale * s * (1.0 + sigma * n)
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::substream;

    #[test]
    fn variance_formula() {
        let c = ChannelConfig::new(0.0, 0.5, 0).unwrap();
        assert!((c.noise_variance() - 1.0).abs() < 1e-15);
        let c = ChannelConfig::new(10.0 * 2f64.log10(), 1.0, 0).unwrap();
        assert!((c.noise_variance() - 0.25).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_rate() {
        assert!(ChannelConfig::new(1.0, 0.0, 0).is_err());
        assert!(ChannelConfig::new(1.0, 1.5, 0).is_err());
        assert!(ChannelConfig::new(f64::NAN, 0.5, 0).is_err());
    }

    #[test]
    fn noiseless_signs_match() {
        let bits = [0u8, 1, 1, 0, 1];
        let llr = transmit(&bits, &ChannelConfig::noiseless(0.5), &mut substream(1, &[]));
        assert_eq!(llr.hard_decision().0, bits.to_vec());
        assert!(llr.iter().all(|l| l.is_finite()));
    }

    #[test]
    fn deterministic_given_stream() {
        let cfg = ChannelConfig::new(2.0, 0.5, 9).unwrap();
        let bits = vec![0u8; 64];
        let a = transmit(&bits, &cfg, &mut substream(9, &[3]));
        let b = transmit(&bits, &cfg, &mut substream(9, &[3]));
        assert_eq!(a, b);
    }
}
