//! The relay receiver: likelihoods once per frame, then either a feed-forward
//! pass (BICM) or the demodulator/decoder extrinsic exchange (BICM-ID), ending
//! in a hard decision on the network message `u1 ^ u2`.

use serde::{Deserialize, Serialize};

use crate::channel::ObservationFrame;
use crate::demod::{CsiMode, FrameDemodulator, SideInfo};
use crate::error::{shape, Error, Result};
use crate::fsk::{modulate_frame, ModParams, ModulatedFrame};
use crate::scalar::Real;
use crate::turbo::{channel_interleaver, hard_decision, CodeParams, InterleaverMap, TurboCodec, CHANNEL_INTERLEAVER_SEED};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Feedback {
    /// Demodulate once, then iterate the decoder alone.
    #[serde(rename = "bicm")]
    Bicm,
    /// Re-demodulate before every decoder iteration with decoder extrinsic as priors.
    #[serde(rename = "bicm-id")]
    BicmId,
}

impl std::fmt::Display for Feedback {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Feedback::Bicm => "bicm",
            Feedback::BicmId => "bicm-id",
        })
    }
}

impl std::str::FromStr for Feedback {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bicm" => Ok(Feedback::Bicm),
            "bicm-id" | "bicmid" => Ok(Feedback::BicmId),
            other => Err(Error::Parameter(format!("unknown feedback mode '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReceiverConfig {
    pub feedback: Feedback,
    pub iterations: usize,
    pub csi: CsiMode,
    pub modulation: ModParams,
    pub code: CodeParams,
}

impl ReceiverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.iterations == 0 {
            return Err(Error::Config("at least one iteration is required".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReceptionReport<T> {
    /// Decoded network message, `K` bits.
    pub message: Vec<u8>,
    /// Information-bit errors after each iteration; empty without a reference.
    pub errors_per_iteration: Vec<usize>,
    /// Final information-bit posteriors.
    pub app: Vec<T>,
}

/// Per-iteration view handed to an [`IterationObserver`].
#[derive(Debug)]
pub struct IterationSnapshot<'a, T> {
    pub iteration: usize,
    /// Priors the demodulator used this iteration (interleaved order, padded).
    /// `None` when the demodulator did not run.
    pub demod_priors: Option<&'a [T]>,
    /// Demodulator extrinsic, deinterleaved to codeword order.
    pub demod_extrinsic: &'a [T],
    /// Decoder extrinsic, codeword order.
    pub decoder_extrinsic: &'a [T],
    pub app: &'a [T],
}

pub trait IterationObserver<T> {
    fn on_iteration(&mut self, snapshot: &IterationSnapshot<'_, T>);
}

/// Shared, immutable receiver state: the code, its interleavers and the
/// configuration. One instance serves any number of concurrent frames.
#[derive(Debug, Clone)]
pub struct RelayReceiver {
    cfg: ReceiverConfig,
    codec: TurboCodec,
    interleaver: InterleaverMap,
}

impl RelayReceiver {
    pub fn new(cfg: ReceiverConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(Self {
            codec: TurboCodec::new(cfg.code)?,
            interleaver: channel_interleaver(cfg.code.codeword_len(), CHANNEL_INTERLEAVER_SEED),
            cfg,
        })
    }

    pub fn config(&self) -> &ReceiverConfig {
        &self.cfg
    }

    pub fn codec(&self) -> &TurboCodec {
        &self.codec
    }

    pub fn channel_interleaver(&self) -> &InterleaverMap {
        &self.interleaver
    }

    /// Terminal-side chain with the same code and interleaver: encode,
    /// interleave, modulate.
    pub fn transmit(&self, info: &[u8]) -> Result<ModulatedFrame> {
        let codeword = self.codec.encode(info)?;
        let interleaved = self.interleaver.permute(&codeword)?;
        modulate_frame(&interleaved, &self.cfg.modulation)
    }

    pub fn receive<T: Real>(&self, y: &ObservationFrame<T>, side: &SideInfo<T>) -> Result<ReceptionReport<T>> {
        self.receive_with(y, side, None, None)
    }

    /// Full receiver with optional error counting against `reference` (the true
    /// network message) and an optional per-iteration observer.
    pub fn receive_with<T: Real>(
        &self,
        y: &ObservationFrame<T>,
        side: &SideInfo<T>,
        reference: Option<&[u8]>,
        mut observer: Option<&mut dyn IterationObserver<T>>,
    ) -> Result<ReceptionReport<T>> {
        let params = self.cfg.modulation;
        let code_len = self.cfg.code.codeword_len();
        let padded = params.padded_len(code_len);
        if y.len() != params.symbol_count(code_len) {
            return Err(shape(format!(
                "frame has {} observations, expected {}",
                y.len(),
                params.symbol_count(code_len)
            )));
        }
        if let Some(r) = reference {
            if r.len() != self.cfg.code.info_len() {
                return Err(shape("reference message length differs from K"));
            }
        }

        let demod = FrameDemodulator::new(y, side, self.cfg.csi, params)?;
        let mut priors = vec![T::zero(); padded];
        for p in &mut priors[code_len..] {
            *p = -T::LLR_LIMIT;
        }
        let mut z = vec![T::zero(); padded];
        let mut z_codeword = vec![T::zero(); code_len];
        let mut state = self.codec.new_state();
        let mut errors = Vec::new();
        let mut app = Vec::new();

        for iteration in 1..=self.cfg.iterations {
            let demodulated = iteration == 1 || self.cfg.feedback == Feedback::BicmId;
            if demodulated {
                demod.demodulate_into(&priors, &mut z)?;
                self.interleaver.unpermute_into(&z[..code_len], &mut z_codeword);
            }
            let out = self.codec.decode_iteration(&z_codeword, &mut state)?;
            if let Some(r) = reference {
                errors.push(count_errors(&out.app, r));
            }
            if let Some(obs) = observer.as_deref_mut() {
                obs.on_iteration(&IterationSnapshot {
                    iteration,
                    demod_priors: demodulated.then_some(&priors[..]),
                    demod_extrinsic: &z_codeword,
                    decoder_extrinsic: &out.extrinsic,
                    app: &out.app,
                });
            }
            if self.cfg.feedback == Feedback::BicmId {
                self.interleaver.permute_into(&out.extrinsic, &mut priors[..code_len]);
            }
            app = out.app;
        }

        Ok(ReceptionReport {
            message: hard_decision(&app),
            errors_per_iteration: errors,
            app,
        })
    }
}

fn count_errors<T: Real>(app: &[T], reference: &[u8]) -> usize {
    app.iter()
        .zip(reference)
        .filter(|(&l, &b)| u8::from(l > T::zero()) != b)
        .count()
}

/// Partner message at a terminal: `u_hat ^ own`.
pub fn recover_partner(network_message: &[u8], own_message: &[u8]) -> Result<Vec<u8>> {
    if network_message.len() != own_message.len() {
        return Err(shape(format!(
            "network message has {} bits, own message {}",
            network_message.len(),
            own_message.len()
        )));
    }
    Ok(network_message.iter().zip(own_message).map(|(a, b)| a ^ b).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn partner_recovery() {
        let u1 = vec![1, 0, 1, 1, 0];
        let u2 = vec![0, 0, 1, 0, 1];
        let net: Vec<u8> = u1.iter().zip(&u2).map(|(a, b)| a ^ b).collect();
        assert_eq!(recover_partner(&net, &u1).unwrap(), u2);
        assert_eq!(recover_partner(&net, &net).unwrap(), vec![0; 5]);
        assert!(recover_partner(&net, &u1[..4]).is_err());
    }

    #[test]
    fn feedback_parsing() {
        assert_eq!("bicm-id".parse::<Feedback>().unwrap(), Feedback::BicmId);
        assert_eq!(Feedback::Bicm.to_string(), "bicm");
        assert!("turbo".parse::<Feedback>().is_err());
    }

    #[test]
    fn zero_iterations_rejected() {
        let cfg = ReceiverConfig {
            feedback: Feedback::Bicm,
            iterations: 0,
            csi: CsiMode::NoCsi,
            modulation: ModParams::new(2).unwrap(),
            code: CodeParams::default(),
        };
        assert!(RelayReceiver::new(cfg).is_err());
    }

    proptest! {
        #[test]
        fn partner_matches_bitwise_xor(a in proptest::collection::vec(0u8..2, 0..64), seed in 0u8..2) {
            let b: Vec<u8> = a.iter().map(|x| x ^ seed).collect();
            let g = recover_partner(&a, &b).unwrap();
            prop_assert!(g.iter().all(|&x| x == seed));
        }
    }
}
