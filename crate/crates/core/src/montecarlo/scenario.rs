//! Encoder-mix scenarios compared on paired arrival streams.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::gain_table::GainTable;
use super::sim::{run_simulation, SimConfig};
use crate::error::{Error, Result};
use crate::sched::Algorithm;

/// LDPC and polar encoders available for data-plane coding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Scenario {
    pub ldpc: usize,
    pub polar: usize,
}

impl Scenario {
    pub const L4: Scenario = Scenario { ldpc: 4, polar: 0 };
    pub const L3P2: Scenario = Scenario { ldpc: 3, polar: 2 };
    pub const L2P2: Scenario = Scenario { ldpc: 2, polar: 2 };
    pub const L4P2: Scenario = Scenario { ldpc: 4, polar: 2 };

    pub fn standard() -> Vec<Scenario> {
        vec![Scenario::L4, Scenario::L3P2, Scenario::L2P2]
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}L", self.ldpc)?;
        if self.polar > 0 {
            write!(f, "{}P", self.polar)?;
        }
        Ok(())
    }
}

impl FromStr for Scenario {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("scenario {s:?} is not like 3L2P"));
        let s_up = s.to_ascii_uppercase();
        let (l, rest) = s_up.split_once('L').ok_or_else(bad)?;
        let ldpc = l.parse().map_err(|_| bad())?;
        let polar = if rest.is_empty() {
            0
        } else {
            rest.strip_suffix('P').ok_or_else(bad)?.parse().map_err(|_| bad())?
        };
        Ok(Scenario { ldpc, polar })
    }
}

impl Serialize for ScenarioRow {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("ScenarioRow", 6)?;
        st.serialize_field("scenario", &self.scenario.to_string())?;
        st.serialize_field("ebno_db", &self.ebno_db)?;
        st.serialize_field("injection_prob", &self.injection_prob)?;
        st.serialize_field("seed", &self.seed)?;
        st.serialize_field("perf", &self.perf)?;
        st.serialize_field("gain_pct_vs_4L", &self.gain_pct_vs_4l)?;
        st.end()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioRow {
    pub scenario: Scenario,
    pub ebno_db: f64,
    pub injection_prob: f64,
    pub seed: u64,
    /// Reciprocal of the makespan, per tick.
    pub perf: f64,
    pub gain_pct_vs_4l: f64,
}

/// Min-queue runs of every scenario at every grid point and seed. Gains are
/// against the 4L run with the same Eb/No, injection probability and seed,
/// so all scenarios see the same arrivals.
pub fn run_scenario_comparison(
    base: &SimConfig,
    scenarios: &[Scenario],
    ebno_grid: &[f64],
    injection_grid: &[f64],
    seeds: &[u64],
    table: &GainTable,
) -> Result<Vec<ScenarioRow>> {
    let mut all = vec![Scenario::L4];
    all.extend(scenarios.iter().filter(|s| **s != Scenario::L4));
    let mut cells = Vec::new();
    for &eb in ebno_grid {
        for &inj in injection_grid {
            for &seed in seeds {
                cells.push((eb, inj, seed));
            }
        }
    }
    let per_cell: Vec<Vec<(Scenario, f64)>> = cells
        .par_iter()
        .map(|&(eb, inj, seed)| {
            all.iter()
                .map(|&sc| {
                    let cfg = SimConfig {
                        num_ldpc: sc.ldpc,
                        num_polar: sc.polar,
                        injection_prob: inj,
                        ebno_db: eb,
                        seed,
                        algorithm: Algorithm::MinQueue,
                        ..base.clone()
                    };
                    let m = run_simulation(&cfg, table)?.metrics;
                    let perf = if m.makespan > 0.0 { 1.0 / m.makespan } else { 0.0 };
                    Ok((sc, perf))
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    let mut rows = Vec::new();
    for (&(eb, inj, seed), res) in cells.iter().zip(&per_cell) {
        let base_perf = res[0].1;
        for &(sc, perf) in res {
            if !scenarios.contains(&sc) {
                continue;
            }
            let gain = if base_perf > 0.0 { 100.0 * (perf - base_perf) / base_perf } else { 0.0 };
            rows.push(ScenarioRow {
                scenario: sc,
                ebno_db: eb,
                injection_prob: inj,
                seed,
                perf,
                gain_pct_vs_4l: gain,
            });
        }
    }
    Ok(rows)
}

pub fn write_scenario_csv<W: Write>(rows: &[ScenarioRow], w: W) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record(["scenario", "ebno_db", "injection_prob", "seed", "perf", "gain_pct_vs_4L"])?;
    for r in rows {
        wr.write_record([
            r.scenario.to_string(),
            format!("{:.2}", r.ebno_db),
            format!("{:.2}", r.injection_prob),
            r.seed.to_string(),
            format!("{:.9e}", r.perf),
            format!("{:.6}", r.gain_pct_vs_4l),
        ])?;
    }
    wr.flush()?;
    Ok(())
}
