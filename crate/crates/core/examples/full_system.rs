//! Replaces LDPC encoders with polar ones (3L2P, 2L2P) and reports the
//! min-queue performance gain over four LDPC encoders per Eb/No.
//!
//! ```text
//! cargo run --release --example full_system -- [SEEDS] [INJECTION]
//! ```

use uepsim::montecarlo::{default_ebno_grid, run_scenario_comparison, GainTable, Scenario, SimConfig};

fn main() -> uepsim::Result<()> {
    let mut args = std::env::args().skip(1);
    let seeds: u64 = args.next().map_or(5, |s| s.parse().expect("SEEDS must be an integer"));
    let inj: f64 = args.next().map_or(0.5, |s| s.parse().expect("INJECTION must be a number"));
    let table = GainTable::default_table();
    let seeds: Vec<u64> = (0..seeds).collect();
    let grid = default_ebno_grid();
    let scenarios = [Scenario::L3P2, Scenario::L2P2];
    let rows = run_scenario_comparison(&SimConfig::default(), &scenarios, &grid, &[inj], &seeds, &table)?;
    println!("injection probability {inj}, {} seeds", seeds.len());
    for eb in &grid {
        let mut line = format!("{eb:.1} dB");
        for sc in scenarios {
            let g: Vec<f64> = rows
                .iter()
                .filter(|r| r.scenario == sc && r.ebno_db == *eb)
                .map(|r| r.gain_pct_vs_4l)
                .collect();
            line += &format!("  {sc} {:>8.2}%", g.iter().sum::<f64>() / g.len() as f64);
        }
        println!("{line}");
    }
    Ok(())
}
