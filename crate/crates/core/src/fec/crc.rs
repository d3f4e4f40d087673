//! Bit-serial CRC used by the CRC-aided list decoder.

use serde::{Deserialize, Serialize};

/// Default CRC length for the polar path.
pub const DEFAULT_CRC_LEN: usize = 12;
/// Default CRC-12 generator in Koopman notation (x^12 term implied by the
/// top bit, +1 term dropped).
pub const DEFAULT_CRC12_KOOPMAN: u32 = 0xC06;

/// CRC with zero initial register and no output xor, so the map from message
/// to checksum is linear over GF(2).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Crc {
    pub len: usize,
    /// Generator in normal form: coefficients of x^(len-1)..x^0.
    pub poly: u32,
}

impl Crc {
    pub fn new(len: usize, poly: u32) -> Self {
        assert!(len <= 32, "crc longer than 32 bits");
        Crc {
            len,
            poly: poly & Self::mask(len),
        }
    }

    pub fn from_koopman(len: usize, koopman: u32) -> Self {
        Self::new(len, (koopman << 1) | 1)
    }

    /// The CRC of `crc_len` bits used when nothing else is configured.
    pub fn default_for_len(len: usize) -> Self {
        match len {
            0 => Crc { len: 0, poly: 0 },
            DEFAULT_CRC_LEN => Self::from_koopman(DEFAULT_CRC_LEN, DEFAULT_CRC12_KOOPMAN),
            // x^len + x + 1 keeps shorter/longer test configurations usable.
            _ => Self::new(len, 0b11),
        }
    }

    fn mask(len: usize) -> u32 {
        if len == 32 {
            u32::MAX
        } else {
            (1u32 << len) - 1
        }
    }

    pub fn remainder(&self, bits: &[u8]) -> u32 {
        if self.len == 0 {
            return 0;
        }
        let mask = Self::mask(self.len);
        let mut reg = 0u32;
        for &b in bits {
            let top = ((reg >> (self.len - 1)) & 1) ^ (b as u32 & 1);
            reg = (reg << 1) & mask;
            if top == 1 {
                reg ^= self.poly;
            }
        }
        reg
    }

    /// Writes the checksum of `msg` MSB-first into `out` (length `self.len`).
    pub fn write(&self, msg: &[u8], out: &mut [u8]) {
        debug_assert_eq!(out.len(), self.len);
        let r = self.remainder(msg);
        for (i, o) in out.iter_mut().enumerate() {
            *o = ((r >> (self.len - 1 - i)) & 1) as u8;
        }
    }

    /// True if the trailing `self.len` bits of `word` are the CRC of the rest.
    pub fn check(&self, word: &[u8]) -> bool {
        if self.len == 0 {
            return true;
        }
        let split = word.len() - self.len;
        let r = self.remainder(&word[..split]);
        word[split..]
            .iter()
            .enumerate()
            .all(|(i, &b)| ((r >> (self.len - 1 - i)) & 1) as u8 == b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn koopman_conversion() {
        let c = Crc::from_koopman(12, 0xC06);
        assert_eq!(c.poly, 0x80D);
    }

    #[test]
    fn zero_message_zero_crc() {
        let c = Crc::default_for_len(12);
        assert_eq!(c.remainder(&[0; 100]), 0);
    }

    #[test]
    fn check_detects_single_flip() {
        let c = Crc::default_for_len(12);
        let msg: Vec<u8> = (0..40).map(|i| (i * 7 % 3 == 0) as u8).collect();
        let mut word = msg.clone();
        word.extend(std::iter::repeat_n(0, 12));
        c.write(&msg, &mut word[40..]);
        assert!(c.check(&word));
        for i in 0..word.len() {
            let mut w = word.clone();
            w[i] ^= 1;
            assert!(!c.check(&w), "flip at {i} undetected");
        }
    }

    #[test]
    fn crc_is_linear() {
        let c = Crc::default_for_len(12);
        let a: Vec<u8> = (0..30).map(|i| (i % 3 == 0) as u8).collect();
        let b: Vec<u8> = (0..30).map(|i| (i % 5 == 1) as u8).collect();
        let ab: Vec<u8> = a.iter().zip(&b).map(|(x, y)| x ^ y).collect();
        assert_eq!(c.remainder(&ab), c.remainder(&a) ^ c.remainder(&b));
    }
}
