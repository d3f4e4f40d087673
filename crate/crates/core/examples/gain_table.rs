//! Builds the gain table used by the scheduler and writes it as JSON.
//!
//! ```text
//! cargo run --release --example gain_table -- [OUT.json] [PAGES]
//! ```

use std::time::Instant;

use uepsim::fec::{CodeKind, CodeSpec};
use uepsim::montecarlo::{build_gain_table, GainTableConfig};

fn main() -> uepsim::Result<()> {
    let mut args = std::env::args().skip(1);
    let out = args.next().unwrap_or_else(|| "gain_table.json".into());
    let mut cfg = GainTableConfig::default();
    if let Some(p) = args.next() {
        cfg.pages = p.parse().expect("PAGES must be an integer");
    }
    let codes = [CodeSpec::standard(CodeKind::Ldpc)?, CodeSpec::standard(CodeKind::Polar)?];
    let t = Instant::now();
    let table = build_gain_table(&codes, &cfg)?;
    table.save(&out)?;
    println!("wrote {out} ({} cells, base rate {:.4} MB/tick) in {:.0?}", table.entries.len(), table.base_rate, t.elapsed());
    for e in &table.entries {
        println!(
            "{:>5} {:.1} dB {:>7} k={} gain {:>10.2}% rate {:.4}",
            e.code.to_string(),
            e.ebno_db,
            e.ratio.to_string(),
            e.quality_level,
            100.0 * e.gain,
            e.rate
        );
    }
    Ok(())
}
