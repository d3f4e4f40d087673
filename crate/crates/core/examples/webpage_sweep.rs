//! Approximate web-page transfer: sweeps the text:image split and reports
//! the performance gain of protecting only the text and the top image
//! bit-planes over protecting everything.
//!
//! ```text
//! cargo run --release --example webpage_sweep -- [PAGES] [EBNO_DB]
//! ```

use uepsim::approx::{webpage_sweep, GrayImage, Ratio, ThroughputParams};
use uepsim::fec::{CodeKind, CodeSpec, DecoderConfig};
use uepsim::{characterize, ChannelConfig};

fn main() -> uepsim::Result<()> {
    let mut args = std::env::args().skip(1);
    let pages: u64 = args.next().map_or(20, |s| s.parse().expect("PAGES must be an integer"));
    let eb: f64 = args.next().map_or(1.5, |s| s.parse().expect("EBNO_DB must be a number"));
    let image = uepsim::cli::default_asset().downscale(4)?;
    let image = GrayImage::crop(&image, 0, 0, 32, 32)?;
    let dec = DecoderConfig::default();
    for kind in [CodeKind::Polar, CodeKind::Ldpc] {
        let code = CodeSpec::standard(kind)?;
        let cfg = ChannelConfig::new(eb, code.rate(), 3)?;
        let profile = characterize(&code, &cfg, &dec, 1000)?;
        let rows = webpage_sweep(
            &code,
            &profile,
            &cfg,
            &dec,
            &ThroughputParams::default(),
            &image,
            &Ratio::sweep(),
            &[0, 1, 2],
            pages,
        )?;
        println!("{kind} at {eb} dB, {pages} pages per point");
        for r in rows {
            println!(
                "  {:>7} {:<16} gain {:>9.2}%  MS-SSIM {}",
                r.ratio_or_npframes,
                r.scenario,
                r.gain_percent,
                r.quality_score.map_or("-".into(), |q| format!("{q:.4}"))
            );
        }
    }
    Ok(())
}
