//! Relay demodulator: super-symbol likelihoods and the network-coded soft mapper.

pub mod bessel;
pub mod likelihood;
pub mod somap;

use serde::{Deserialize, Serialize};

use crate::channel::{ChannelRealization, ObservationFrame};
use crate::error::{shape, Error, Result};
use crate::fsk::ModParams;
use crate::scalar::Real;

pub use bessel::log_bessel_i0;
pub use likelihood::{super_symbol_loglik_csi, super_symbol_loglik_nocsi, SuperSymbolLikelihoods};
pub use somap::dnc_somap;

/// What the relay knows about the fading gains. Phases are never known.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CsiMode {
    /// Per-symbol fading amplitudes are known.
    #[serde(rename = "amplitude")]
    AmplitudeCsi,
    /// Only average received energies are known.
    #[serde(rename = "none")]
    NoCsi,
}

impl std::fmt::Display for CsiMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            CsiMode::AmplitudeCsi => "amplitude",
            CsiMode::NoCsi => "none",
        })
    }
}

impl std::str::FromStr for CsiMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "amplitude" | "csi" => Ok(CsiMode::AmplitudeCsi),
            "none" | "nocsi" => Ok(CsiMode::NoCsi),
            other => Err(Error::Parameter(format!("unknown CSI mode '{other}'"))),
        }
    }
}

/// Side information available to the relay for one frame.
#[derive(Debug, Clone, PartialEq)]
pub struct SideInfo<T> {
    pub noise_psd: T,
    pub energy1: T,
    pub energy2: T,
    /// Per-symbol amplitudes of both terminals, required for amplitude CSI.
    pub amplitudes: Option<(Vec<T>, Vec<T>)>,
}

impl<T: Real> SideInfo<T> {
    pub fn energies_only(energy1: T, energy2: T, noise_psd: T) -> Self {
        Self {
            noise_psd,
            energy1,
            energy2,
            amplitudes: None,
        }
    }

    /// Everything the relay could know from a realization, minus the phases.
    pub fn from_realization(realization: &ChannelRealization<T>, energy1: T, energy2: T) -> Self {
        Self {
            noise_psd: realization.noise_psd,
            energy1,
            energy2,
            amplitudes: Some((realization.amplitudes1().collect(), realization.amplitudes2().collect())),
        }
    }
}

/// Per-frame demodulator. The likelihood tables are computed once at
/// construction and reused for every call to [`FrameDemodulator::demodulate`].
#[derive(Debug, Clone)]
pub struct FrameDemodulator<T> {
    params: ModParams,
    symbols: usize,
    /// `M` per-label log-likelihoods per observation.
    label_ll: Vec<T>,
}

impl<T: Real> FrameDemodulator<T> {
    pub fn new(y: &ObservationFrame<T>, side: &SideInfo<T>, csi: CsiMode, params: ModParams) -> Result<Self> {
        let m = params.mod_order();
        if y.mod_order() != m {
            return Err(shape("observation frame does not match the modulation order"));
        }
        let n = y.len();
        let mut label_ll = vec![T::zero(); n * m];
        let mut table = SuperSymbolLikelihoods::new(params, vec![T::zero(); m * m])?;
        match csi {
            CsiMode::AmplitudeCsi => {
                let (a1, a2) = side
                    .amplitudes
                    .as_ref()
                    .ok_or_else(|| Error::Config("amplitude CSI requires fading amplitudes".into()))?;
                if a1.len() != n || a2.len() != n {
                    return Err(shape("amplitude side information does not match the frame length"));
                }
                if !(side.noise_psd > T::zero()) {
                    return Err(Error::Parameter("noise spectral density must be positive".into()));
                }
                for (k, col) in y.columns().enumerate() {
                    likelihood::fill_csi(col, a1[k], a2[k], side.noise_psd, &mut table.values);
                    somap::label_likelihoods(&table, &mut label_ll[k * m..(k + 1) * m]);
                }
            }
            CsiMode::NoCsi => {
                if !(side.energy1 > T::zero() && side.energy2 > T::zero() && side.noise_psd > T::zero()) {
                    return Err(Error::Parameter("energies and noise spectral density must be positive".into()));
                }
                for (k, col) in y.columns().enumerate() {
                    likelihood::fill_nocsi(col, side.energy1, side.energy2, side.noise_psd, &mut table.values);
                    somap::label_likelihoods(&table, &mut label_ll[k * m..(k + 1) * m]);
                }
            }
        }
        Ok(Self {
            params,
            symbols: n,
            label_ll,
        })
    }

    pub fn params(&self) -> ModParams {
        self.params
    }

    /// Number of bits covered by one pass, `N_q * mu`.
    pub fn bit_len(&self) -> usize {
        self.symbols * self.params.bits_per_symbol()
    }

    /// Extrinsic LLRs for every (padded, interleaved-order) codeword bit.
    pub fn demodulate_into(&self, priors: &[T], out: &mut [T]) -> Result<()> {
        let mu = self.params.bits_per_symbol();
        let m = self.params.mod_order();
        if priors.len() != self.bit_len() || out.len() != self.bit_len() {
            return Err(shape(format!(
                "prior/output length {}/{} does not match frame bit length {}",
                priors.len(),
                out.len(),
                self.bit_len()
            )));
        }
        for k in 0..self.symbols {
            somap::somap_from_labels(
                &self.label_ll[k * m..(k + 1) * m],
                &priors[k * mu..(k + 1) * mu],
                &mut out[k * mu..(k + 1) * mu],
            );
        }
        Ok(())
    }

    pub fn demodulate(&self, priors: &[T]) -> Result<Vec<T>> {
        let mut out = vec![T::zero(); self.bit_len()];
        self.demodulate_into(priors, &mut out)?;
        Ok(out)
    }
}

/// One-shot frame demodulation.
pub fn demodulate_frame<T: Real>(
    y: &ObservationFrame<T>,
    side: &SideInfo<T>,
    csi: CsiMode,
    params: ModParams,
    priors: &[T],
) -> Result<Vec<T>> {
    FrameDemodulator::new(y, side, csi, params)?.demodulate(priors)
}
