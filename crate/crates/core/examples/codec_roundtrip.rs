//! Encodes random payloads with both (1024, 512) codes, sends them over
//! BPSK/AWGN and reports the block error rate at a few Eb/No points.
//!
//! ```text
//! cargo run --release --example codec_roundtrip -- [FRAMES]
//! ```

use rand::Rng;
use uepsim::fec::{CodeKind, CodeSpec, DecoderConfig};
use uepsim::rng::substream;
use uepsim::{transmit, ChannelConfig};

fn main() -> uepsim::Result<()> {
    let frames: u64 = std::env::args().nth(1).map_or(300, |s| s.parse().expect("FRAMES must be an integer"));
    let dec = DecoderConfig::default();
    for kind in [CodeKind::Polar, CodeKind::Ldpc] {
        let code = CodeSpec::standard(kind)?;
        println!("{kind}: N={} K={} payload={} bits", code.n_total(), code.k_info(), code.payload_capacity());
        for eb in [1.0, 1.5, 2.0] {
            let cfg = ChannelConfig::new(eb, code.rate(), 7)?;
            let mut errors = 0;
            for t in 0..frames {
                let mut rng = substream(7, &[t]);
                let payload: Vec<u8> = (0..code.payload_capacity()).map(|_| rng.random_range(0..2)).collect();
                let info = code.info_bits(&payload)?;
                let llrs = transmit(&code.encode_info(&info)?, &cfg, &mut rng);
                if code.decode(&llrs, &dec)?.info != info {
                    errors += 1;
                }
            }
            println!("  {eb:.1} dB  BLER {:.4} ({errors}/{frames})", errors as f64 / frames as f64);
        }
    }
    Ok(())
}
