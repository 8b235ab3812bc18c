//! Monte Carlo estimate of the BICM binary information rate at the relay
//! demodulator output:
//!
//! `R = 1 - log2(e)/mu * sum_k E[ max*(0, Lambda(b_k) * (-1)^b_k) ]`
//!
//! where `Lambda(b_k)` is the feed-forward demodulator LLR of network bit `b_k`.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::complex_gaussian;
use crate::demod::likelihood::{fill_csi, fill_nocsi};
use crate::demod::somap::{label_likelihoods, somap_from_labels};
use crate::demod::{CsiMode, SuperSymbolLikelihoods};
use crate::error::{param, shape, Error, Result};
use crate::fsk::ModParams;
use crate::maxstar::max_star;

/// Trials per independently seeded chunk.
pub const RATE_CHUNK: u64 = 4096;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateEstimate {
    pub mod_order: usize,
    pub csi: CsiMode,
    pub es_over_n0_db: f64,
    /// `Es/N0 - 10 log10(R mu)`; infinite when `R <= 0`.
    pub eb_over_n0_db: f64,
    pub rate: f64,
    pub std_error: f64,
    pub trials: u64,
}

/// Per-trial penalty `sum_k max*(0, Lambda_k (-1)^b_k)` in nats.
#[inline]
pub fn bit_penalty(llrs: &[f64], bits: &[u8]) -> f64 {
    llrs.iter()
        .zip(bits)
        .map(|(&l, &b)| max_star(0.0, if b == 1 { -l } else { l }))
        .sum()
}

/// Rate from explicit LLRs and their true bits, `mu` bits per symbol.
pub fn rate_from_llrs(llrs: &[f64], bits: &[u8], bits_per_symbol: usize) -> Result<f64> {
    if llrs.len() != bits.len() || llrs.is_empty() || llrs.len() % bits_per_symbol != 0 {
        return Err(shape("LLRs and bits must have equal, nonzero length divisible by mu"));
    }
    let symbols = (llrs.len() / bits_per_symbol) as f64;
    let mean = bit_penalty(llrs, bits) / symbols;
    Ok(1.0 - std::f64::consts::LOG2_E / bits_per_symbol as f64 * mean)
}

#[derive(Default, Clone, Copy)]
struct Moments {
    n: u64,
    sum: f64,
    sum_sq: f64,
}

fn run_chunk(params: ModParams, csi: CsiMode, noise_psd: f64, trials: u64, seed: u64) -> Moments {
    let m = params.mod_order();
    let mu = params.bits_per_symbol();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut table = SuperSymbolLikelihoods::new(params, vec![0.0; m * m]).expect("table size");
    let mut labels = vec![0.0; m];
    let zeros = vec![0.0; mu];
    let mut llrs = vec![0.0; mu];
    let mut bits = vec![0u8; mu];
    let mut y = vec![Complex::new(0.0, 0.0); m];
    let mut acc = Moments::default();
    for _ in 0..trials {
        let q1 = rng.random_range(0..m);
        let q2 = rng.random_range(0..m);
        let h1: Complex<f64> = complex_gaussian(1.0, &mut rng);
        let h2: Complex<f64> = complex_gaussian(1.0, &mut rng);
        for v in y.iter_mut() {
            *v = complex_gaussian(noise_psd, &mut rng);
        }
        y[q1] += h1;
        y[q2] += h2;
        match csi {
            CsiMode::AmplitudeCsi => fill_csi(&y, h1.norm(), h2.norm(), noise_psd, &mut table.values),
            CsiMode::NoCsi => fill_nocsi(&y, 1.0, 1.0, noise_psd, &mut table.values),
        }
        label_likelihoods(&table, &mut labels);
        somap_from_labels(&labels, &zeros, &mut llrs);
        let label = q1 ^ q2;
        for (k, b) in bits.iter_mut().enumerate() {
            *b = ((label >> k) & 1) as u8;
        }
        let x = bit_penalty(&llrs, &bits) / mu as f64;
        acc.n += 1;
        acc.sum += x;
        acc.sum_sq += x * x;
    }
    acc
}

/// Rate at one `Es/N0` (per terminal, dB), with unit received energies.
///
/// Trials are split into chunks of [`RATE_CHUNK`]; chunk `c` is seeded with
/// `seed + c` and chunk sums are combined in chunk order, so the result does not
/// depend on how many threads ran the chunks.
pub fn estimate_rate(params: ModParams, csi: CsiMode, es_over_n0_db: f64, trials: u64, seed: u64) -> Result<RateEstimate> {
    if trials == 0 {
        return Err(param("at least one trial is required"));
    }
    if !es_over_n0_db.is_finite() {
        return Err(Error::Parameter("Es/N0 must be finite".into()));
    }
    let noise_psd = 10f64.powf(-es_over_n0_db / 10.0);
    let chunks = trials.div_ceil(RATE_CHUNK);
    let parts: Vec<Moments> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let n = RATE_CHUNK.min(trials - c * RATE_CHUNK);
            run_chunk(params, csi, noise_psd, n, seed.wrapping_add(c))
        })
        .collect();
    let total = parts.iter().fold(Moments::default(), |a, p| Moments {
        n: a.n + p.n,
        sum: a.sum + p.sum,
        sum_sq: a.sum_sq + p.sum_sq,
    });
    let n = total.n as f64;
    let mean = total.sum / n;
    let var = if total.n > 1 {
        ((total.sum_sq - n * mean * mean) / (n - 1.0)).max(0.0)
    } else {
        0.0
    };
    let rate = 1.0 - std::f64::consts::LOG2_E * mean;
    let mu = params.bits_per_symbol() as f64;
    let eb_over_n0_db = if rate > 0.0 {
        es_over_n0_db - 10.0 * (rate * mu).log10()
    } else {
        f64::INFINITY
    };
    Ok(RateEstimate {
        mod_order: params.mod_order(),
        csi,
        es_over_n0_db,
        eb_over_n0_db,
        rate,
        std_error: std::f64::consts::LOG2_E * (var / n).sqrt(),
        trials,
    })
}

/// Rate at every grid point. All points share `seed` (common random numbers),
/// which keeps the curve smooth across the grid.
pub fn rate_sweep(params: ModParams, csi: CsiMode, es_grid_db: &[f64], trials: u64, seed: u64) -> Result<Vec<RateEstimate>> {
    es_grid_db
        .iter()
        .map(|&es| estimate_rate(params, csi, es, trials, seed))
        .collect()
}

/// Rate at which `Eb/N0` is smallest: parabolic refinement of the discrete
/// minimum, with both Eb/N0 and R interpolated as functions of Es/N0.
/// Returns `(rate, eb_over_n0_db)`.
pub fn most_efficient_rate(curve: &[RateEstimate]) -> Option<(f64, f64)> {
    let pts: Vec<&RateEstimate> = curve.iter().filter(|r| r.eb_over_n0_db.is_finite()).collect();
    let (i, _) = pts
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.eb_over_n0_db.total_cmp(&b.1.eb_over_n0_db))?;
    if i == 0 || i + 1 == pts.len() {
        return Some((pts[i].rate, pts[i].eb_over_n0_db));
    }
    let (a, b, c) = (pts[i - 1], pts[i], pts[i + 1]);
    let (x0, x1, x2) = (a.es_over_n0_db, b.es_over_n0_db, c.es_over_n0_db);
    let (y0, y1, y2) = (a.eb_over_n0_db, b.eb_over_n0_db, c.eb_over_n0_db);
    let denom = (x0 - x1) * (x0 - x2) * (x1 - x2);
    let ca = (x2 * (y1 - y0) + x1 * (y0 - y2) + x0 * (y2 - y1)) / denom;
    let cb = (x2 * x2 * (y0 - y1) + x1 * x1 * (y2 - y0) + x0 * x0 * (y1 - y2)) / denom;
    if !(ca > 0.0) {
        return Some((b.rate, b.eb_over_n0_db));
    }
    let xs = (-cb / (2.0 * ca)).clamp(x0, x2);
    let cc = y1 - ca * x1 * x1 - cb * x1;
    let eb = ca * xs * xs + cb * xs + cc;
    let rate = if xs <= x1 {
        a.rate + (b.rate - a.rate) * (xs - x0) / (x1 - x0)
    } else {
        b.rate + (c.rate - b.rate) * (xs - x1) / (x2 - x1)
    };
    Some((rate, eb))
}
