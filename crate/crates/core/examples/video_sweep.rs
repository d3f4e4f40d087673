//! Approximate video transfer: protects the I-frame and the first n of the
//! 14 P-frames of a panning GOP and reports gain and MS-SSIM per n.
//!
//! ```text
//! cargo run --release --example video_sweep -- [GOPS] [EBNO_DB]
//! ```

use uepsim::approx::{video_sweep, GopPayload, ThroughputParams, P_FRAMES};
use uepsim::fec::{CodeKind, CodeSpec, DecoderConfig};
use uepsim::{characterize, ChannelConfig};

fn main() -> uepsim::Result<()> {
    let mut args = std::env::args().skip(1);
    let gops: u64 = args.next().map_or(10, |s| s.parse().expect("GOPS must be an integer"));
    let eb: f64 = args.next().map_or(1.5, |s| s.parse().expect("EBNO_DB must be a number"));
    let source = uepsim::cli::default_asset().downscale(2)?;
    let gop = GopPayload::panning(&source, 48, 48, P_FRAMES + 1)?;
    println!("GOP of {} frames, {} bytes", gop.frame_count(), gop.size_bytes());
    let dec = DecoderConfig::default();
    let code = CodeSpec::standard(CodeKind::Polar)?;
    let cfg = ChannelConfig::new(eb, code.rate(), 5)?;
    let profile = characterize(&code, &cfg, &dec, 1000)?;
    for r in video_sweep(&code, &profile, &cfg, &dec, &ThroughputParams::default(), &gop, gops)? {
        println!(
            "  n_p={:>2} gain {:>8.2}%  MS-SSIM {}",
            r.ratio_or_npframes,
            r.gain_percent,
            r.quality_score.map_or("-".into(), |q| format!("{q:.4}"))
        );
    }
    Ok(())
}
