//! Compares the four encoder assignment algorithms on one 4 LDPC + 2 polar
//! card across injection probabilities, averaged over seeds.
//!
//! ```text
//! cargo run --release --example scheduling -- [SEEDS]
//! ```

use uepsim::montecarlo::{run_simulation, GainTable, SimConfig};
use uepsim::sched::Algorithm;

fn main() -> uepsim::Result<()> {
    let seeds: u64 = std::env::args().nth(1).map_or(5, |s| s.parse().expect("SEEDS must be an integer"));
    let table = GainTable::default_table();
    println!("{:>5} {:>9} {:>10} {:>10} {:>10} {:>10}", "p", "algorithm", "makespan", "wait", "flow", "throughput");
    for inj in [0.1, 0.3, 0.5, 0.7, 0.9] {
        for algo in Algorithm::ALL {
            let mut acc = [0.0; 4];
            for seed in 0..seeds {
                let cfg = SimConfig {
                    injection_prob: inj,
                    algorithm: algo,
                    seed,
                    ..SimConfig::default()
                };
                let m = run_simulation(&cfg, &table)?.metrics;
                for (a, v) in acc.iter_mut().zip([m.makespan, m.avg_wait, m.avg_flow, m.avg_throughput]) {
                    *a += v / seeds as f64;
                }
            }
            println!(
                "{inj:>5.1} {:>9} {:>10.1} {:>10.2} {:>10.2} {:>10.4}",
                algo.name(),
                acc[0],
                acc[1],
                acc[2],
                acc[3]
            );
        }
    }
    Ok(())
}
