//! Configuration records and drivers for the `uepsim` command line.
//!
//! Each subcommand reads an optional JSON config (missing fields take their
//! defaults), applies flag overrides, validates, runs, and writes its CSV or
//! JSON outputs into the output directory.

use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::approx::payload::{GopPayload, Ratio, P_FRAMES};
use crate::approx::sweep::{video_sweep, webpage_sweep, write_sweep_csv};
use crate::approx::throughput::ThroughputParams;
use crate::approx::GrayImage;
use crate::channel::ChannelConfig;
use crate::error::{Error, Result};
use crate::fec::{construct_polar_code, generate_ldpc_code, CodeKind, CodeSpec, DecoderConfig};
use crate::fec::crc::DEFAULT_CRC_LEN;
use crate::montecarlo::{
    default_ebno_grid, run_scenario_comparison, run_simulation, write_scenario_csv, GainTable, Scenario, SimConfig,
};
use crate::rng::derive_seed;
use crate::sched::Algorithm;
use crate::uep::{characterize, summarize};

/// The bundled 256x256 test image.
const DEFAULT_ASSET: &[u8] = include_bytes!("../../assets/test_card.pgm");

pub fn default_asset() -> GrayImage {
    GrayImage::from_pgm(DEFAULT_ASSET).expect("bundled asset is a valid PGM")
}

#[derive(Debug, Parser)]
#[command(name = "uepsim", version, about = "Unequal error protection and encoder scheduling simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// JSON file with the command's parameters.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Master seed; overrides the config.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
    /// Trials (characterize), pages or GOPs (transmit), or seeds (schedule, fullsystem).
    #[arg(long, global = true)]
    pub trials: Option<u64>,
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true)]
    pub parallel: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Per-position error counts of one code at one Eb/No.
    Characterize,
    /// Web-page ratio sweep or video protected-P-frame sweep.
    Transmit {
        #[arg(long, value_enum)]
        mode: Option<TransmitMode>,
    },
    /// The four allocation algorithms across injection probabilities.
    Schedule,
    /// 4L / 3L2P / 2L2P scenario comparison with min-queue.
    Fullsystem,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TransmitMode {
    Webpage,
    Video,
}

/// Code parameters shared by the FEC-driven commands.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CodeParams {
    pub code: CodeKind,
    pub n: usize,
    pub k: usize,
    pub crc_len: usize,
    /// Polar construction design point.
    pub design_ebno_db: f64,
    /// Seed of the LDPC PEG construction.
    pub ldpc_seed: u64,
    pub list_size: usize,
    pub max_iters: usize,
}

impl Default for CodeParams {
    fn default() -> Self {
        CodeParams {
            code: CodeKind::Polar,
            n: 1024,
            k: 512,
            crc_len: DEFAULT_CRC_LEN,
            design_ebno_db: 2.0,
            ldpc_seed: 1,
            list_size: 8,
            max_iters: 25,
        }
    }
}

impl CodeParams {
    pub fn build(&self) -> Result<CodeSpec> {
        if self.list_size == 0 || self.max_iters == 0 {
            return Err(Error::InvalidArgument("list size and iterations must be positive".into()));
        }
        Ok(match self.code {
            CodeKind::Polar => construct_polar_code(self.n, self.k, self.design_ebno_db, self.crc_len)?.into(),
            CodeKind::Ldpc => generate_ldpc_code(self.n, self.k, self.ldpc_seed)?.into(),
        })
    }

    pub fn decoder(&self) -> DecoderConfig {
        DecoderConfig {
            list_size: self.list_size,
            max_iters: self.max_iters,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CharacterizeConfig {
    #[serde(flatten)]
    pub code: CodeParams,
    pub ebno_db: f64,
    pub trials: u64,
    pub seed: u64,
}

impl Default for CharacterizeConfig {
    fn default() -> Self {
        CharacterizeConfig {
            code: CodeParams::default(),
            ebno_db: 2.0,
            trials: 10_000,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TransmitConfig {
    pub mode: TransmitMode,
    #[serde(flatten)]
    pub code: CodeParams,
    pub ebno_db: f64,
    /// Trials for the UEP profile that drives the mapping.
    pub profile_trials: u64,
    /// Pages (web-page mode) or GOPs (video mode).
    pub items: u64,
    pub ratios: Vec<Ratio>,
    pub quality_levels: Vec<u8>,
    /// PGM source; the bundled test card when absent.
    pub image: Option<PathBuf>,
    /// Downscale factor applied to the source image for pages.
    pub page_downscale: usize,
    /// Frame size of the panning GOP.
    pub frame_width: usize,
    pub frame_height: usize,
    pub throughput: ThroughputParams,
    pub seed: u64,
}

impl Default for TransmitConfig {
    fn default() -> Self {
        TransmitConfig {
            mode: TransmitMode::Webpage,
            code: CodeParams::default(),
            ebno_db: 2.0,
            profile_trials: 2000,
            items: 20,
            ratios: Ratio::sweep(),
            quality_levels: vec![0, 1],
            image: None,
            page_downscale: 4,
            frame_width: 32,
            frame_height: 32,
            throughput: ThroughputParams::default(),
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScheduleConfig {
    /// Gain table JSON; the bundled table when absent.
    pub gain_table: Option<PathBuf>,
    pub sim: SimConfig,
    pub algorithms: Vec<Algorithm>,
    pub injection_probs: Vec<f64>,
    pub seeds: u64,
}

impl Default for ScheduleConfig {
    fn default() -> Self {
        ScheduleConfig {
            gain_table: None,
            sim: SimConfig::default(),
            algorithms: Algorithm::ALL.to_vec(),
            injection_probs: (1..=10).map(|i| i as f64 / 10.0).collect(),
            seeds: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FullsystemConfig {
    pub gain_table: Option<PathBuf>,
    pub sim: SimConfig,
    pub scenarios: Vec<String>,
    pub ebno_grid: Vec<f64>,
    pub injection_probs: Vec<f64>,
    pub seeds: u64,
}

impl Default for FullsystemConfig {
    fn default() -> Self {
        FullsystemConfig {
            gain_table: None,
            sim: SimConfig::default(),
            scenarios: Scenario::standard().iter().map(|s| s.to_string()).collect(),
            ebno_grid: default_ebno_grid(),
            injection_probs: vec![0.5, 0.7, 0.9],
            seeds: 3,
        }
    }
}

/// Reads `path` as `T`, or the defaults when no path is given.
pub fn load_config<T: DeserializeOwned + Default>(path: Option<&Path>) -> Result<T> {
    match path {
        None => Ok(T::default()),
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| match e.kind() {
                std::io::ErrorKind::NotFound => Error::MissingFile(p.to_path_buf()),
                _ => Error::Io(e),
            })?;
            Ok(serde_json::from_str(&text)?)
        }
    }
}

fn load_table(path: Option<&Path>) -> Result<GainTable> {
    match path {
        Some(p) => GainTable::load(p),
        None => Ok(GainTable::default_table()),
    }
}

fn create(dir: &Path, name: &str) -> Result<(BufWriter<File>, PathBuf)> {
    fs::create_dir_all(dir)?;
    let path = dir.join(name);
    Ok((BufWriter::new(File::create(&path)?), path))
}

fn seed_list(master: u64, n: u64) -> Vec<u64> {
    (0..n).map(|i| derive_seed(master, &[0x53_45_45_44, i])).collect()
}

fn check_probs(probs: &[f64]) -> Result<()> {
    if probs.is_empty() || probs.iter().any(|p| !(0.0..=1.0).contains(p)) {
        return Err(Error::InvalidArgument("injection probabilities must be in [0, 1]".into()));
    }
    Ok(())
}

pub fn cmd_characterize(mut cfg: CharacterizeConfig, common: &CommonArgs) -> Result<Vec<PathBuf>> {
    if let Some(s) = common.seed {
        cfg.seed = s;
    }
    if let Some(t) = common.trials {
        cfg.trials = t;
    }
    if cfg.trials == 0 {
        return Err(Error::InvalidArgument("trials must be positive".into()));
    }
    let code = cfg.code.build()?;
    let channel = ChannelConfig::new(cfg.ebno_db, code.rate(), cfg.seed)?;
    let profile = characterize(&code, &channel, &cfg.code.decoder(), cfg.trials)?;
    let (w, csv_path) = create(&common.out, "profile.csv")?;
    profile.write_csv(w)?;
    let (_, json_path) = create(&common.out, "summary.json")?;
    fs::write(&json_path, serde_json::to_string_pretty(&summarize(&profile))?)?;
    Ok(vec![csv_path, json_path])
}

pub fn cmd_transmit(mut cfg: TransmitConfig, mode: Option<TransmitMode>, common: &CommonArgs) -> Result<Vec<PathBuf>> {
    if let Some(m) = mode {
        cfg.mode = m;
    }
    if let Some(s) = common.seed {
        cfg.seed = s;
    }
    if let Some(t) = common.trials {
        cfg.items = t;
    }
    if cfg.items == 0 || cfg.profile_trials == 0 {
        return Err(Error::InvalidArgument("items and profile trials must be positive".into()));
    }
    cfg.throughput.validate()?;
    let code = cfg.code.build()?;
    let dec = cfg.code.decoder();
    let profile_channel = ChannelConfig::new(cfg.ebno_db, code.rate(), derive_seed(cfg.seed, &[1]))?;
    let profile = characterize(&code, &profile_channel, &dec, cfg.profile_trials)?;
    let channel = ChannelConfig::new(cfg.ebno_db, code.rate(), derive_seed(cfg.seed, &[2]))?;
    let source = match &cfg.image {
        Some(p) => GrayImage::read_pgm(p)?,
        None => default_asset(),
    };
    let rows = match cfg.mode {
        TransmitMode::Webpage => {
            if cfg.quality_levels.iter().any(|&k| k > 8) {
                return Err(Error::InvalidArgument("quality levels must be in 0..=8".into()));
            }
            let image = source.downscale(cfg.page_downscale)?;
            webpage_sweep(&code, &profile, &channel, &dec, &cfg.throughput, &image, &cfg.ratios, &cfg.quality_levels, cfg.items)?
        }
        TransmitMode::Video => {
            let gop = GopPayload::panning(&source, cfg.frame_width, cfg.frame_height, P_FRAMES + 1)?;
            video_sweep(&code, &profile, &channel, &dec, &cfg.throughput, &gop, cfg.items)?
        }
    };
    let (w, path) = create(&common.out, "transmit.csv")?;
    write_sweep_csv(&rows, w)?;
    Ok(vec![path])
}

pub fn cmd_schedule(mut cfg: ScheduleConfig, common: &CommonArgs) -> Result<Vec<PathBuf>> {
    if let Some(s) = common.seed {
        cfg.sim.seed = s;
    }
    if let Some(t) = common.trials {
        cfg.seeds = t;
    }
    check_probs(&cfg.injection_probs)?;
    if cfg.seeds == 0 || cfg.algorithms.is_empty() {
        return Err(Error::InvalidArgument("need at least one seed and one algorithm".into()));
    }
    cfg.sim.validate()?;
    let table = load_table(cfg.gain_table.as_deref())?;
    let (w, path) = create(&common.out, "schedule.csv")?;
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record(["algorithm", "injection_prob", "seeds", "jobs", "avg_throughput", "avg_wait", "avg_flow", "makespan"])?;
    let seeds = seed_list(cfg.sim.seed, cfg.seeds);
    for &alg in &cfg.algorithms {
        for &p in &cfg.injection_probs {
            let mut acc = [0.0; 5];
            for &seed in &seeds {
                let sim = SimConfig {
                    algorithm: alg,
                    injection_prob: p,
                    seed,
                    ..cfg.sim.clone()
                };
                let m = run_simulation(&sim, &table)?.metrics;
                for (a, v) in acc.iter_mut().zip([m.jobs as f64, m.avg_throughput, m.avg_wait, m.avg_flow, m.makespan]) {
                    *a += v / seeds.len() as f64;
                }
            }
            wr.write_record([
                alg.to_string(),
                format!("{p:.2}"),
                seeds.len().to_string(),
                format!("{:.2}", acc[0]),
                format!("{:.6}", acc[1]),
                format!("{:.6}", acc[2]),
                format!("{:.6}", acc[3]),
                format!("{:.6}", acc[4]),
            ])?;
        }
    }
    wr.flush()?;
    Ok(vec![path])
}

pub fn cmd_fullsystem(mut cfg: FullsystemConfig, common: &CommonArgs) -> Result<Vec<PathBuf>> {
    if let Some(s) = common.seed {
        cfg.sim.seed = s;
    }
    if let Some(t) = common.trials {
        cfg.seeds = t;
    }
    check_probs(&cfg.injection_probs)?;
    if cfg.seeds == 0 || cfg.ebno_grid.is_empty() {
        return Err(Error::InvalidArgument("need at least one seed and one Eb/No point".into()));
    }
    cfg.sim.validate()?;
    let scenarios = cfg
        .scenarios
        .iter()
        .map(|s| s.parse())
        .collect::<Result<Vec<Scenario>>>()?;
    let table = load_table(cfg.gain_table.as_deref())?;
    let seeds = seed_list(cfg.sim.seed, cfg.seeds);
    let rows = run_scenario_comparison(&cfg.sim, &scenarios, &cfg.ebno_grid, &cfg.injection_probs, &seeds, &table)?;
    let (w, path) = create(&common.out, "fullsystem.csv")?;
    write_scenario_csv(&rows, w)?;
    Ok(vec![path])
}

/// Parses nothing: dispatches an already parsed command line.
pub fn run(cli: &Cli) -> Result<Vec<PathBuf>> {
    let common = &cli.common;
    if let Some(k) = common.parallel {
        if k == 0 {
            return Err(Error::InvalidArgument("--parallel must be at least 1".into()));
        }
        // A second initialization (e.g. repeated calls in one process) keeps
        // the first pool, which does not change any result.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(k).build_global();
    }
    let cfg = common.config.as_deref();
    match &cli.command {
        Command::Characterize => cmd_characterize(load_config(cfg)?, common),
        Command::Transmit { mode } => cmd_transmit(load_config(cfg)?, *mode, common),
        Command::Schedule => cmd_schedule(load_config(cfg)?, common),
        Command::Fullsystem => cmd_fullsystem(load_config(cfg)?, common),
    }
}
