//! Bit and soft-value containers shared by the codecs and the channel.

use std::ops::{BitXor, Deref, DerefMut};

use rand::Rng;
use serde::{Deserialize, Serialize};

/// A sequence of hard bits, one `u8` (0 or 1) per position.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Bits(pub Vec<u8>);

impl Bits {
    pub fn zeros(len: usize) -> Self {
        Bits(vec![0; len])
    }

    pub fn random<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Self {
        Bits((0..len).map(|_| rng.random::<bool>() as u8).collect())
    }

    /// Expands `value` into `width` bits, MSB first.
    pub fn from_u64(value: u64, width: usize) -> Self {
        Bits((0..width).rev().map(|i| ((value >> i) & 1) as u8).collect())
    }

    pub fn count_ones(&self) -> usize {
        self.0.iter().filter(|&&b| b != 0).count()
    }

    pub fn hamming_distance(&self, other: &Bits) -> usize {
        self.0.iter().zip(&other.0).filter(|(a, b)| a != b).count()
    }

    pub fn into_inner(self) -> Vec<u8> {
        self.0
    }
}

impl From<Vec<u8>> for Bits {
    fn from(v: Vec<u8>) -> Self {
        Bits(v)
    }
}

impl Deref for Bits {
    type Target = [u8];
    fn deref(&self) -> &[u8] {
        &self.0
    }
}

impl DerefMut for Bits {
    fn deref_mut(&mut self) -> &mut [u8] {
        &mut self.0
    }
}

impl BitXor for &Bits {
    type Output = Bits;
    fn bitxor(self, rhs: &Bits) -> Bits {
        assert_eq!(self.len(), rhs.len(), "xor of unequal-length bit vectors");
        Bits(self.0.iter().zip(&rhs.0).map(|(a, b)| a ^ b).collect())
    }
}

/// Log-likelihood ratios, positive when bit 0 is more likely.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Llrs(pub Vec<f64>);

impl Llrs {
    /// LLRs a noiseless channel would deliver for `bits`.
    pub fn noiseless(bits: &[u8], magnitude: f64) -> Self {
        Llrs(
            bits.iter()
                .map(|&b| if b == 0 { magnitude } else { -magnitude })
                .collect(),
        )
    }

    pub fn hard_decision(&self) -> Bits {
        Bits(self.0.iter().map(|&l| (l < 0.0) as u8).collect())
    }
}

impl Deref for Llrs {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl DerefMut for Llrs {
    fn deref_mut(&mut self) -> &mut [f64] {
        &mut self.0
    }
}

impl From<Vec<f64>> for Llrs {
    fn from(v: Vec<f64>) -> Self {
        Llrs(v)
    }
}
