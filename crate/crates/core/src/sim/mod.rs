//! Monte Carlo drivers: BER/FER sweeps over Eb/N0 and information-rate sweeps,
//! with deterministic per-frame seeding and CSV/gnuplot output.

pub mod config;
pub mod output;

pub use output::{emit_csv, emit_plot_script, emit_rate_csv, parse_csv, parse_rate_csv, PlotData};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{apply_ma_channel, ChannelRealization};
use crate::demod::{CsiMode, SideInfo};
use crate::error::{Error, Result};
use crate::receiver::{Feedback, ReceiverConfig, RelayReceiver};



/// Frames simulated per parallel batch. Fixed so that results never depend on
/// the number of workers.
pub const FRAME_BATCH: usize = 16;

/// Per-terminal `Es/N0` (linear) for a per-terminal `Eb/N0` in dB:
/// `Es/N0 = r * mu * Eb/N0`.
pub fn es_over_n0(ebn0_db: f64, code_rate: f64, bits_per_symbol: usize) -> f64 {
    10f64.powf(ebn0_db / 10.0) * code_rate * bits_per_symbol as f64
}

/// Seed of frame `index` under `master`.
#[inline]
pub fn frame_seed(master: u64, index: u64) -> u64 {
    master.wrapping_add(index)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub receiver: ReceiverConfig,
    pub ebn0_grid: Vec<f64>,
    pub max_frames: u64,
    pub max_bit_errors: u64,
    pub seed: u64,
    /// Worker threads; `0` uses the global pool.
    pub workers: usize,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        self.receiver.validate()?;
        if self.ebn0_grid.is_empty() {
            return Err(Error::Config("empty Eb/N0 grid".into()));
        }
        if self.max_frames == 0 || self.max_bit_errors == 0 {
            return Err(Error::Config("stopping thresholds must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BerRecord {
    pub ebn0_db: f64,
    pub ber: f64,
    pub fer: f64,
    pub frames: u64,
    pub bit_errors: u64,
    pub frame_errors: u64,
    pub iterations: usize,
    pub feedback: Feedback,
    pub csi: CsiMode,
    pub mod_order: usize,
}

/// Error counts of one simulated frame.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameOutcome {
    /// Information-bit errors after each iteration.
    pub errors_per_iteration: Vec<usize>,
}

impl FrameOutcome {
    pub fn bit_errors(&self) -> usize {
        self.errors_per_iteration.last().copied().unwrap_or(0)
    }
}

/// Simulates one frame end to end: two random messages, both terminal chains,
/// the multiple-access channel and the relay receiver. Energies are normalized
/// to one; the noise level carries the SNR.
pub fn simulate_frame(receiver: &RelayReceiver, ebn0_db: f64, seed: u64) -> Result<FrameOutcome> {
    let cfg = receiver.config();
    let k = cfg.code.info_len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u1: Vec<u8> = (0..k).map(|_| rng.random_range(0..2u8)).collect();
    let u2: Vec<u8> = (0..k).map(|_| rng.random_range(0..2u8)).collect();
    let network: Vec<u8> = u1.iter().zip(&u2).map(|(a, b)| a ^ b).collect();
    let x1 = receiver.transmit(&u1)?;
    let x2 = receiver.transmit(&u2)?;
    let snr = es_over_n0(ebn0_db, cfg.code.rate(), cfg.modulation.bits_per_symbol());
    let (energy, noise_psd) = (1.0, 1.0 / snr);
    let realization = ChannelRealization::sample(energy, energy, noise_psd, x1.len(), &mut rng)?;
    let y = apply_ma_channel(&x1, &x2, &realization, &mut rng)?;
    let side = SideInfo::from_realization(&realization, energy, energy);
    let report = receiver.receive_with(&y, &side, Some(&network), None)?;
    Ok(FrameOutcome {
        errors_per_iteration: report.errors_per_iteration,
    })
}

fn with_pool<R: Send>(workers: usize, f: impl FnOnce() -> R + Send) -> Result<R> {
    if workers == 0 {
        return Ok(f());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

/// Simulates frames until `max_bit_errors` is reached or `max_frames` have run.
///
/// Frames are generated in fixed-size batches and reduced in frame order, so the
/// stopping point and every count are independent of the worker count.
pub fn run_ber_point(cfg: &ExperimentConfig, ebn0_db: f64) -> Result<BerRecord> {
    cfg.validate()?;
    let receiver = RelayReceiver::new(cfg.receiver)?;
    with_pool(cfg.workers, || ber_point_with(&receiver, cfg, ebn0_db))?
}

fn ber_point_with(receiver: &RelayReceiver, cfg: &ExperimentConfig, ebn0_db: f64) -> Result<BerRecord> {
    let k = cfg.receiver.code.info_len() as u64;
    let (mut frames, mut bit_errors, mut frame_errors) = (0u64, 0u64, 0u64);
    'outer: while frames < cfg.max_frames && bit_errors < cfg.max_bit_errors {
        let batch = (cfg.max_frames - frames).min(FRAME_BATCH as u64);
        let outcomes: Vec<Result<FrameOutcome>> = (frames..frames + batch)
            .into_par_iter()
            .map(|i| simulate_frame(receiver, ebn0_db, frame_seed(cfg.seed, i)))
            .collect();
        for outcome in outcomes {
            let errors = outcome?.bit_errors() as u64;
            frames += 1;
            bit_errors += errors;
            frame_errors += u64::from(errors > 0);
            if bit_errors >= cfg.max_bit_errors {
                break 'outer;
            }
        }
    }
    Ok(BerRecord {
        ebn0_db,
        ber: bit_errors as f64 / (k * frames) as f64,
        fer: frame_errors as f64 / frames as f64,
        frames,
        bit_errors,
        frame_errors,
        iterations: cfg.receiver.iterations,
        feedback: cfg.receiver.feedback,
        csi: cfg.receiver.csi,
        mod_order: cfg.receiver.modulation.mod_order(),
    })
}

/// One record per grid point, in grid order.
pub fn run_sweep(cfg: &ExperimentConfig) -> Result<Vec<BerRecord>> {
    cfg.validate()?;
    let receiver = RelayReceiver::new(cfg.receiver)?;
    with_pool(cfg.workers, || {
        cfg.ebn0_grid
            .iter()
            .map(|&e| ber_point_with(&receiver, cfg, e))
            .collect::<Result<Vec<_>>>()
    })?
}

/// Eb/N0 where the BER crosses `target`, by log-linear interpolation between
/// the first pair of grid points that brackets it. `None` if no bracket exists.
pub fn ebn0_at_ber(records: &[BerRecord], target: f64) -> Option<f64> {
    let mut pts: Vec<(f64, f64)> = records.iter().map(|r| (r.ebn0_db, r.ber)).collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    pts.windows(2).find_map(|w| {
        let ((x0, y0), (x1, y1)) = (w[0], w[1]);
        if y0 >= target && y1 < target {
            if y1 <= 0.0 {
                return Some(x1);
            }
            let (l0, l1, lt) = (y0.log10(), y1.log10(), target.log10());
            Some(x0 + (x1 - x0) * (l0 - lt) / (l0 - l1))
        } else {
            None
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fsk::ModParams;
    use crate::turbo::CodeParams;

    fn record(ebn0_db: f64, ber: f64) -> BerRecord {
        BerRecord {
            ebn0_db,
            ber,
            fer: 0.0,
            frames: 1,
            bit_errors: 0,
            frame_errors: 0,
            iterations: 1,
            feedback: Feedback::Bicm,
            csi: CsiMode::NoCsi,
            mod_order: 2,
        }
    }

    #[test]
    fn interpolation() {
        let r = [record(1.0, 1e-2), record(2.0, 1e-4), record(3.0, 1e-6)];
        assert!((ebn0_at_ber(&r, 1e-3).unwrap() - 1.5).abs() < 1e-12);
        assert!((ebn0_at_ber(&r, 1e-5).unwrap() - 2.5).abs() < 1e-12);
        assert_eq!(ebn0_at_ber(&r, 1e-1), None);
        let r = [record(1.0, 1e-2), record(2.0, 0.0)];
        assert_eq!(ebn0_at_ber(&r, 1e-3), Some(2.0));
    }

    #[test]
    fn es_conversion() {
        let v = es_over_n0(0.0, 0.5, 2);
        assert!((v - 1.0).abs() < 1e-15);
        assert!((es_over_n0(10.0, 1.0, 1) - 10.0).abs() < 1e-12);
    }

    #[test]
    fn invalid_experiment() {
        let cfg = ExperimentConfig {
            receiver: ReceiverConfig {
                feedback: Feedback::Bicm,
                iterations: 1,
                csi: CsiMode::NoCsi,
                modulation: ModParams::new(2).unwrap(),
                code: CodeParams::default(),
            },
            ebn0_grid: vec![],
            max_frames: 1,
            max_bit_errors: 1,
            seed: 0,
            workers: 1,
        };
        assert!(cfg.validate().is_err());
        assert!(ExperimentConfig { ebn0_grid: vec![1.0], max_frames: 0, ..cfg.clone() }.validate().is_err());
        assert!(ExperimentConfig { ebn0_grid: vec![1.0], ..cfg }.validate().is_ok());
    }
}
