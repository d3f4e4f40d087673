//! Forward error correction: polar and LDPC codes over GF(2).

pub mod alist;
pub mod crc;
pub mod ldpc;
pub mod polar;
mod scl;
pub mod sparse;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use crc::Crc;
pub use ldpc::{
    generate_ldpc_code, generate_ldpc_code_with, ldpc_decode_bp, ldpc_encode, load_ldpc_matrix,
    DegreeProfile, LdpcCodeSpec, LdpcDecoded,
};
pub use polar::{
    construct_polar_code, construct_polar_code_with, polar_decode_cascl, polar_encode,
    Construction, PolarCodeSpec, PolarDecoded,
};
pub use sparse::SparseMatrix;

use crate::bits::{Bits, Llrs};
use crate::error::{Error, Result};

/// Default CA-SCL list size.
pub const DEFAULT_LIST_SIZE: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum CodeKind {
    Ldpc,
    Polar,
}

impl fmt::Display for CodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CodeKind::Ldpc => f.write_str("LDPC"),
            CodeKind::Polar => f.write_str("POLAR"),
        }
    }
}

impl FromStr for CodeKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ldpc" => Ok(CodeKind::Ldpc),
            "polar" => Ok(CodeKind::Polar),
            other => Err(Error::InvalidArgument(format!("unknown code kind {other:?}"))),
        }
    }
}

/// Decoder knobs shared by both code families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecoderConfig {
    pub list_size: usize,
    pub max_iters: usize,
}

impl Default for DecoderConfig {
    fn default() -> Self {
        DecoderConfig {
            list_size: DEFAULT_LIST_SIZE,
            max_iters: ldpc::DEFAULT_MAX_ITERS,
        }
    }
}

/// Hard output of either decoder, covering all K information positions.
#[derive(Debug, Clone, PartialEq)]
pub struct Decoded {
    pub info: Bits,
    /// CRC pass for polar, syndrome convergence for LDPC.
    pub success: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CodeSpec {
    Polar(PolarCodeSpec),
    Ldpc(LdpcCodeSpec),
}

impl CodeSpec {
    pub fn kind(&self) -> CodeKind {
        match self {
            CodeSpec::Polar(_) => CodeKind::Polar,
            CodeSpec::Ldpc(_) => CodeKind::Ldpc,
        }
    }

    pub fn n_total(&self) -> usize {
        match self {
            CodeSpec::Polar(p) => p.n_total,
            CodeSpec::Ldpc(l) => l.n_total,
        }
    }

    /// Number of information positions, K.
    pub fn k_info(&self) -> usize {
        match self {
            CodeSpec::Polar(p) => p.k_info,
            CodeSpec::Ldpc(l) => l.k_info,
        }
    }

    /// Information positions free for user data (K minus any CRC).
    pub fn payload_capacity(&self) -> usize {
        match self {
            CodeSpec::Polar(p) => p.payload_len(),
            CodeSpec::Ldpc(l) => l.k_info,
        }
    }

    /// K / N.
    pub fn rate(&self) -> f64 {
        self.k_info() as f64 / self.n_total() as f64
    }

    /// Completes `payload` to the K information bits (appends the CRC for polar).
    pub fn info_bits(&self, payload: &[u8]) -> Result<Bits> {
        match self {
            CodeSpec::Polar(p) => p.attach_crc(payload),
            CodeSpec::Ldpc(l) => {
                if payload.len() != l.k_info {
                    return Err(Error::LengthMismatch {
                        expected: l.k_info,
                        actual: payload.len(),
                    });
                }
                Ok(Bits(payload.to_vec()))
            }
        }
    }

    /// Encodes a full set of K information bits.
    pub fn encode_info(&self, info: &[u8]) -> Result<Bits> {
        match self {
            CodeSpec::Polar(p) => p.encode_info(info),
            CodeSpec::Ldpc(l) => l.encode(info),
        }
    }

    pub fn encode(&self, payload: &[u8]) -> Result<Bits> {
        let info = self.info_bits(payload)?;
        self.encode_info(&info)
    }

    pub fn decode(&self, llrs: &Llrs, cfg: &DecoderConfig) -> Result<Decoded> {
        match self {
            CodeSpec::Polar(p) => {
                let d = p.decode(llrs, cfg.list_size)?;
                Ok(Decoded {
                    info: d.info,
                    success: d.crc_pass,
                })
            }
            CodeSpec::Ldpc(l) => {
                let d = l.decode(llrs, cfg.max_iters)?;
                Ok(Decoded {
                    info: d.payload,
                    success: d.converged,
                })
            }
        }
    }

    /// The (N=1024, K=512) code of each family used throughout the experiments.
    pub fn standard(kind: CodeKind) -> Result<CodeSpec> {
        match kind {
            CodeKind::Polar => Ok(CodeSpec::Polar(construct_polar_code(
                1024,
                512,
                2.0,
                crc::DEFAULT_CRC_LEN,
            )?)),
            CodeKind::Ldpc => Ok(CodeSpec::Ldpc(generate_ldpc_code(1024, 512, 1)?)),
        }
    }
}

impl From<PolarCodeSpec> for CodeSpec {
    fn from(p: PolarCodeSpec) -> Self {
        CodeSpec::Polar(p)
    }
}

impl From<LdpcCodeSpec> for CodeSpec {
    fn from(l: LdpcCodeSpec) -> Self {
        CodeSpec::Ldpc(l)
    }
}
