//! Noncoherent relay receiver for the two-way relay channel with digital network
//! coding: M-FSK over a Rayleigh multiple-access channel, super-symbol soft
//! demodulation with or without amplitude CSI, a rate-matched UMTS turbo code,
//! iterative demodulation and decoding, and binary information-rate estimation.
//!
//! The numeric kernels are generic over [`Real`] (`f32` or `f64`); the aliases
//! below fix them to `f64`, which is what the simulation harness uses.

pub mod channel;
pub mod demod;
pub mod error;
pub mod fsk;
pub mod maxstar;
pub mod rate;
pub mod receiver;
pub mod scalar;
pub mod sim;
pub mod turbo;

pub use error::{Error, Result};
pub use scalar::Real;

pub use demod::CsiMode;
pub use fsk::{ModParams, SuperSymbol, ToneSymbol};
pub use receiver::Feedback;
pub use turbo::{CodeParams, TurboCodec};

/// Scalar used throughout the simulation harness.
pub type Scalar = f64;

pub type FadingCoefficient = channel::FadingCoefficient<Scalar>;
pub type ChannelRealization = channel::ChannelRealization<Scalar>;
pub type ObservationFrame = channel::ObservationFrame<Scalar>;
pub type SideInfo = demod::SideInfo<Scalar>;
pub type FrameDemodulator = demod::FrameDemodulator<Scalar>;
pub type SuperSymbolLikelihoods = demod::SuperSymbolLikelihoods<Scalar>;
pub type CodecState = turbo::CodecState<Scalar>;
pub type DecoderOutput = turbo::DecoderOutput<Scalar>;
pub type ReceptionReport = receiver::ReceptionReport<Scalar>;
pub type RelayReceiver = receiver::RelayReceiver;

/// A vector of per-bit LLRs, positive toward bit value 1.
pub type LlrVector = Vec<Scalar>;
