use std::path::Path;

use twrc::receiver::{ReceiverConfig, RelayReceiver};
use twrc::sim::{
    ebn0_at_ber, emit_csv, parse_csv, run_ber_point, run_sweep, simulate_frame, BerRecord, ExperimentConfig,
};
use twrc::{CodeParams, CsiMode, Feedback, ModParams};

fn experiment(m: usize, feedback: Feedback, iterations: usize, grid: &[f64], frames: u64) -> ExperimentConfig {
    ExperimentConfig {
        receiver: ReceiverConfig {
            feedback,
            iterations,
            csi: CsiMode::AmplitudeCsi,
            modulation: ModParams::new(m).unwrap(),
            code: CodeParams::default(),
        },
        ebn0_grid: grid.to_vec(),
        max_frames: frames,
        max_bit_errors: u64::MAX,
        seed: 99,
        workers: 1,
    }
}

fn golden_config() -> ExperimentConfig {
    experiment(4, Feedback::BicmId, 2, &[8.0, 10.0, 12.0], 24)
}

#[test]
fn noiseless_proxy_has_no_errors() {
    let rec = run_ber_point(&experiment(2, Feedback::Bicm, 1, &[30.0], 100), 30.0).unwrap();
    assert_eq!(rec.frames, 100);
    assert_eq!(rec.bit_errors, 0);
    assert_eq!(rec.ber, 0.0);
}

#[test]
fn record_bookkeeping() {
    let cfg = experiment(2, Feedback::Bicm, 2, &[4.0], 40);
    let rec = run_ber_point(&cfg, 4.0).unwrap();
    assert_eq!(rec.ber, rec.bit_errors as f64 / (1229.0 * rec.frames as f64));
    assert_eq!(rec.fer, rec.frame_errors as f64 / rec.frames as f64);
    assert!(rec.frame_errors <= rec.frames && rec.bit_errors >= rec.frame_errors);
    assert!((0.0..=1.0).contains(&rec.ber));
}

#[test]
fn stops_at_error_budget() {
    let mut cfg = experiment(2, Feedback::Bicm, 1, &[0.0], 1000);
    cfg.max_bit_errors = 50;
    let rec = run_ber_point(&cfg, 0.0).unwrap();
    assert!(rec.bit_errors >= 50);
    assert!(rec.frames < 1000);
    // The last counted frame is the one that crossed the budget.
    let rx = RelayReceiver::new(cfg.receiver).unwrap();
    let before: u64 = (0..rec.frames - 1)
        .map(|i| simulate_frame(&rx, 0.0, cfg.seed + i).unwrap().bit_errors() as u64)
        .sum();
    assert!(before < 50);
}

#[test]
fn sweep_is_independent_of_workers() {
    let mut cfg = golden_config();
    let a = run_sweep(&cfg).unwrap();
    cfg.workers = 3;
    let b = run_sweep(&cfg).unwrap();
    assert_eq!(a, b);
}

#[test]
fn golden_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sweep.csv");
    emit_csv(&run_sweep(&golden_config()).unwrap(), &out).unwrap();
    let produced = std::fs::read_to_string(&out).unwrap();
    let golden_path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/golden_sweep.csv");
    if std::env::var_os("TWRC_BLESS").is_some() {
        std::fs::write(&golden_path, &produced).unwrap();
    }
    let golden = std::fs::read_to_string(&golden_path).unwrap();
    assert_eq!(produced, golden);
    let parsed = parse_csv(golden.as_bytes()).unwrap();
    assert_eq!(parsed.len(), 3);
}

#[test]
fn crossing_interpolation() {
    let rec = |e: f64, ber: f64| BerRecord {
        ebn0_db: e,
        ber,
        fer: 0.0,
        frames: 1,
        bit_errors: 0,
        frame_errors: 0,
        iterations: 1,
        feedback: Feedback::Bicm,
        csi: CsiMode::NoCsi,
        mod_order: 2,
    };
    let curve = [rec(2.0, 1e-4), rec(0.0, 1e-2), rec(1.0, 1e-3 * 10f64.sqrt())];
    let x = ebn0_at_ber(&curve, 1e-3).unwrap();
    assert!((x - 4.0 / 3.0).abs() < 1e-12, "{x}");
    assert!(ebn0_at_ber(&curve, 1e-6).is_none());
}
