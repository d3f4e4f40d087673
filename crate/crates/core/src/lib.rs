//! Simulation toolkit for unequal error protection (UEP) in polar and LDPC
//! codes and for putting idle polar encoders to work in a base station's
//! data plane.
//!
//! The crate is organized bottom-up:
//!
//! - [`fec`]: polar codes (construction, encoding, CRC-aided list decoding)
//!   and LDPC codes (PEG construction, alist I/O, sum-product decoding).
//! - [`channel`]: BPSK over AWGN with LLR output.
//! - [`uep`]: per-position error profiles and protection orderings.
//! - [`approx`]: approximate web-page and GOP video transfer with selective
//!   retransmission, MS-SSIM scoring and a TCP throughput model.
//! - [`sched`]: encoder nodes, jobs and the four online allocation policies.
//! - [`montecarlo`]: workload sampling, gain tables, the time-stepped base
//!   station simulation and scenario comparisons.
//! - [`cli`]: configuration records and drivers behind the `uepsim` binary.

pub mod approx;
pub mod bits;
pub mod channel;
pub mod cli;
pub mod error;
pub mod fec;
pub mod montecarlo;
pub mod rng;
pub mod sched;
pub mod stats;
pub mod uep;

pub use bits::{Bits, Llrs};
pub use channel::{transmit, ChannelConfig};
pub use error::{Error, Result};
pub use fec::{CodeKind, CodeSpec, DecoderConfig};
pub use uep::{characterize, protection_order, summarize, BitErrorProfile};
