use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use twrc::receiver::ReceiverConfig;
use twrc::sim::config::{parse_config, parse_grid};
use twrc::sim::{emit_csv, emit_plot_script, emit_rate_csv, run_ber_point, ExperimentConfig, PlotData};
use twrc::{rate, CodeParams, CsiMode, Feedback, ModParams};

/// Noncoherent two-way relay receiver simulator.
///
/// Eb/N0 is per terminal and per information bit: each terminal's symbol SNR is
/// Es/N0 = (K/L) * log2(M) * Eb/N0. Every option can also be given as a
/// TWRC_* environment variable or in a key = value file passed with --config;
/// command-line flags win over the file, and the file wins over defaults.
#[derive(Parser, Debug)]
#[command(name = "twrc", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// BER/FER sweep over Eb/N0.
    Ber(BerArgs),
    /// Binary information-rate sweep over Es/N0.
    Rate(RateArgs),
}

#[derive(Args, Debug)]
struct Common {
    /// key = value configuration file.
    #[arg(long, env = "TWRC_CONFIG")]
    config: Option<PathBuf>,
    /// FSK modulation order: 2, 4 or 8.
    #[arg(long, env = "TWRC_MOD_ORDER")]
    mod_order: Option<usize>,
    /// Channel knowledge at the relay: amplitude or none.
    #[arg(long, env = "TWRC_CSI")]
    csi: Option<String>,
    /// Master seed.
    #[arg(long, env = "TWRC_SEED")]
    seed: Option<u64>,
    /// Output CSV path.
    #[arg(long, env = "TWRC_OUT")]
    out: Option<PathBuf>,
    /// Optional gnuplot script path.
    #[arg(long, env = "TWRC_PLOT")]
    plot: Option<PathBuf>,
    /// Worker threads (0 = all cores).
    #[arg(long, env = "TWRC_WORKERS")]
    workers: Option<usize>,
}

#[derive(Args, Debug)]
struct BerArgs {
    #[command(flatten)]
    common: Common,
    /// Receiver feedback: bicm or bicm-id.
    #[arg(long, env = "TWRC_FEEDBACK")]
    feedback: Option<String>,
    /// Decoding iterations (one demodulation pass per iteration with bicm-id).
    #[arg(long, env = "TWRC_ITERATIONS")]
    iterations: Option<usize>,
    /// Eb/N0 grid in dB, start:step:stop.
    #[arg(long, env = "TWRC_EBN0", allow_hyphen_values = true)]
    ebn0: Option<String>,
    /// Maximum frames per point.
    #[arg(long, env = "TWRC_FRAMES")]
    frames: Option<u64>,
    /// Stop a point after this many bit errors.
    #[arg(long, env = "TWRC_ERRORS")]
    errors: Option<u64>,
    /// Information bits per frame.
    #[arg(long, env = "TWRC_INFO_LEN")]
    info_len: Option<usize>,
    /// Transmitted codeword length.
    #[arg(long, env = "TWRC_CODEWORD_LEN")]
    codeword_len: Option<usize>,
}

#[derive(Args, Debug)]
struct RateArgs {
    #[command(flatten)]
    common: Common,
    /// Es/N0 grid in dB, start:step:stop.
    #[arg(long, env = "TWRC_ES", allow_hyphen_values = true)]
    es: Option<String>,
    /// Trials per grid point.
    #[arg(long, env = "TWRC_TRIALS")]
    trials: Option<u64>,
}

/// Resolves an option: flag (or environment), then file, then default.
struct Resolver {
    file: BTreeMap<String, String>,
}

impl Resolver {
    fn load(path: Option<&PathBuf>) -> Result<Self> {
        let file = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
                parse_config(&text)?
            }
            None => BTreeMap::new(),
        };
        Ok(Self { file })
    }

    fn get<T: FromStr>(&self, flag: Option<T>, key: &str, default: T) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        if let Some(v) = flag {
            return Ok(v);
        }
        match self.file.get(key) {
            Some(raw) => raw.parse().map_err(|e| anyhow::anyhow!("config key '{key}': {e}")),
            None => Ok(default),
        }
    }
}

fn setup_workers(workers: usize) -> Result<()> {
    if workers > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build_global()
            .context("configuring worker threads")?;
    }
    Ok(())
}

fn run_ber(args: BerArgs) -> Result<()> {
    let r = Resolver::load(args.common.config.as_ref())?;
    let mod_order: usize = r.get(args.common.mod_order, "mod-order", 2)?;
    let csi: CsiMode = r.get(args.common.csi, "csi", "amplitude".to_string())?.parse()?;
    let feedback: Feedback = r.get(args.feedback, "feedback", "bicm".to_string())?.parse()?;
    let iterations = r.get(args.iterations, "iterations", 10)?;
    let grid = parse_grid(&r.get(args.ebn0, "ebn0", "10:1:20".to_string())?)?;
    let info_len = r.get(args.info_len, "info-len", CodeParams::DEFAULT_INFO_LEN)?;
    let codeword_len = r.get(args.codeword_len, "codeword-len", CodeParams::DEFAULT_CODEWORD_LEN)?;
    let workers = r.get(args.common.workers, "workers", 0)?;
    let out: PathBuf = r.get(args.common.out, "out", PathBuf::from("ber.csv"))?;
    let plot: Option<PathBuf> = args.common.plot.or_else(|| r.file.get("plot").map(PathBuf::from));

    let cfg = ExperimentConfig {
        receiver: ReceiverConfig {
            feedback,
            iterations,
            csi,
            modulation: ModParams::new(mod_order)?,
            code: CodeParams::new(info_len, codeword_len)?,
        },
        ebn0_grid: grid,
        max_frames: r.get(args.frames, "frames", 200_000)?,
        max_bit_errors: r.get(args.errors, "errors", 200)?,
        seed: r.get(args.common.seed, "seed", 1)?,
        workers: 0,
    };
    cfg.validate()?;
    setup_workers(workers)?;

    let mut records = Vec::with_capacity(cfg.ebn0_grid.len());
    for &ebn0 in &cfg.ebn0_grid {
        let rec = run_ber_point(&cfg, ebn0).with_context(|| format!("point Eb/N0 = {ebn0} dB"))?;
        eprintln!(
            "Eb/N0 {:>6.2} dB  BER {:.3e}  FER {:.3e}  ({} frames, {} bit errors)",
            rec.ebn0_db, rec.ber, rec.fer, rec.frames, rec.bit_errors
        );
        records.push(rec);
    }
    emit_csv(&records, &out).with_context(|| format!("writing {}", out.display()))?;
    if let Some(p) = plot {
        emit_plot_script(PlotData::Ber(&records), &p)?;
    }
    Ok(())
}

fn run_rate(args: RateArgs) -> Result<()> {
    let r = Resolver::load(args.common.config.as_ref())?;
    let mod_order: usize = r.get(args.common.mod_order, "mod-order", 2)?;
    let csi: CsiMode = r.get(args.common.csi, "csi", "amplitude".to_string())?.parse()?;
    let grid = parse_grid(&r.get(args.es, "es", "-4:1:16".to_string())?)?;
    let trials = r.get(args.trials, "trials", 1_000_000)?;
    let seed = r.get(args.common.seed, "seed", 1)?;
    let workers = r.get(args.common.workers, "workers", 0)?;
    let out: PathBuf = r.get(args.common.out, "out", PathBuf::from("rate.csv"))?;
    let plot: Option<PathBuf> = args.common.plot.or_else(|| r.file.get("plot").map(PathBuf::from));
    if trials == 0 {
        bail!("trials must be positive");
    }
    setup_workers(workers)?;

    let records = rate::rate_sweep(ModParams::new(mod_order)?, csi, &grid, trials, seed)?;
    for e in &records {
        eprintln!(
            "Es/N0 {:>6.2} dB  R {:.4} ± {:.4}  Eb/N0 {:.3} dB",
            e.es_over_n0_db, e.rate, e.std_error, e.eb_over_n0_db
        );
    }
    if let Some((rate, eb)) = rate::most_efficient_rate(&records) {
        eprintln!("most energy-efficient rate ≈ {rate:.3} at Eb/N0 ≈ {eb:.2} dB");
    }
    emit_rate_csv(&records, &out).with_context(|| format!("writing {}", out.display()))?;
    if let Some(p) = plot {
        emit_plot_script(PlotData::Rate(&records), &p)?;
    }
    Ok(())
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Ber(args) => run_ber(args),
        Command::Rate(args) => run_rate(args),
    }
}
