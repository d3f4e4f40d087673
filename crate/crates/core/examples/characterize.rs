//! Measures which information positions of each code fail most often and
//! writes the per-position error counts as CSV.
//!
//! ```text
//! cargo run --release --example characterize -- [TRIALS] [EBNO_DB]
//! ```

use std::fs::File;

use uepsim::fec::{CodeKind, CodeSpec, DecoderConfig};
use uepsim::{characterize, protection_order, summarize, ChannelConfig};

fn main() -> uepsim::Result<()> {
    let mut args = std::env::args().skip(1);
    let trials: u64 = args.next().map_or(2000, |s| s.parse().expect("TRIALS must be an integer"));
    let eb: f64 = args.next().map_or(2.0, |s| s.parse().expect("EBNO_DB must be a number"));
    for kind in [CodeKind::Ldpc, CodeKind::Polar] {
        let code = CodeSpec::standard(kind)?;
        let cfg = ChannelConfig::new(eb, code.rate(), 11)?;
        let profile = characterize(&code, &cfg, &DecoderConfig::default(), trials)?;
        let s = summarize(&profile);
        println!(
            "{kind} at {eb} dB, {trials} trials: {} bit errors, head mean {:.2}, tail mean {:.2}, rank correlation {}",
            s.total_errors,
            s.head_mean,
            s.tail_mean,
            s.rank_correlation.map_or("n/a".into(), |r| format!("{r:.3}"))
        );
        let order = protection_order(&profile);
        println!("  most reliable positions: {:?}", &order[..10]);
        let path = format!("profile_{}.csv", kind.to_string().to_lowercase());
        profile.write_csv(File::create(&path)?)?;
        println!("  wrote {path}");
    }
    Ok(())
}
