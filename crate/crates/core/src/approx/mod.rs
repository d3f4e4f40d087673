//! Approximate web-page and video transfer: payload layouts driven by the
//! UEP profile, selective retransmission, quality scoring and timing.

pub mod image;
pub mod mapping;
pub mod msssim;
pub mod payload;
pub mod sweep;
pub mod throughput;
pub mod transfer;

pub use image::GrayImage;
pub use mapping::{build_video_mapping, build_webpage_mapping, Layout, PriorityMapping, SlotRole};
pub use msssim::{mean_ms_ssim, ms_ssim};
pub use payload::{Chunk, GopPayload, Payload, Ratio, WebPagePayload, PAYLOAD_BUDGET, P_FRAMES};
pub use sweep::{video_sweep, webpage_outcomes, webpage_sweep, PolicyOutcome, SweepRow};
pub use throughput::{gain, performance, throughput, transfer_time, ThroughputParams};
pub use transfer::{received_quality, simulate_transfer, simulate_transfer_policies, TransferCounts, TransferStats};
