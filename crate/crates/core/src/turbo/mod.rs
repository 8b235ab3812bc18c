//! Rate-matched UMTS turbo code with a log-MAP iterative decoder that reports
//! extrinsic information for every transmitted bit.

pub mod bcjr;
pub mod interleaver;
pub mod puncture;
pub mod trellis;

use crate::error::{param, shape, Error, Result};
use crate::scalar::Real;
use bcjr::{log_map, ConstituentPosteriors};
pub use interleaver::{build_internal_interleaver, channel_interleaver, InterleaverMap, CHANNEL_INTERLEAVER_SEED};
use puncture::{ParityStream, RateMatcher, TAIL_BITS};
use trellis::MEMORY;

/// Information and codeword lengths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CodeParams {
    info_len: usize,
    codeword_len: usize,
}

impl CodeParams {
    pub const DEFAULT_INFO_LEN: usize = 1229;
    pub const DEFAULT_CODEWORD_LEN: usize = 2048;

    pub fn new(info_len: usize, codeword_len: usize) -> Result<Self> {
        if info_len < 40 {
            return Err(param(format!("information length {info_len} below 40")));
        }
        if codeword_len < info_len + TAIL_BITS {
            return Err(param(format!(
                "codeword length {codeword_len} cannot hold {info_len} systematic and {TAIL_BITS} tail bits"
            )));
        }
        Ok(Self {
            info_len,
            codeword_len,
        })
    }

    pub fn info_len(&self) -> usize {
        self.info_len
    }

    pub fn codeword_len(&self) -> usize {
        self.codeword_len
    }

    pub fn rate(&self) -> f64 {
        self.info_len as f64 / self.codeword_len as f64
    }
}

impl Default for CodeParams {
    fn default() -> Self {
        Self {
            info_len: Self::DEFAULT_INFO_LEN,
            codeword_len: Self::DEFAULT_CODEWORD_LEN,
        }
    }
}

/// Decoder memory carried between iterations of one frame.
#[derive(Debug, Clone, Default)]
pub struct CodecState<T> {
    /// Extrinsic of the second constituent, in natural order; a priori for the first.
    feedback: Vec<T>,
    iteration: usize,
}

impl<T: Real> CodecState<T> {
    pub fn iteration(&self) -> usize {
        self.iteration
    }

    pub fn reset(&mut self) {
        self.feedback.iter_mut().for_each(|v| *v = T::zero());
        self.iteration = 0;
    }
}

/// Result of one decoding iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct DecoderOutput<T> {
    /// Extrinsic LLRs for the `L` transmitted bits, transmitted order.
    pub extrinsic: Vec<T>,
    /// Posterior LLRs of the `K` information bits.
    pub app: Vec<T>,
}

#[derive(Debug, Clone)]
pub struct TurboCodec {
    params: CodeParams,
    internal: InterleaverMap,
    matcher: RateMatcher,
}

impl TurboCodec {
    pub fn new(params: CodeParams) -> Result<Self> {
        Ok(Self {
            internal: build_internal_interleaver(params.info_len)?,
            matcher: RateMatcher::new(params.info_len, params.codeword_len)?,
            params,
        })
    }

    pub fn params(&self) -> CodeParams {
        self.params
    }

    pub fn internal_interleaver(&self) -> &InterleaverMap {
        &self.internal
    }

    pub fn rate_matcher(&self) -> &RateMatcher {
        &self.matcher
    }

    /// Encodes `K` information bits into `L` transmitted bits.
    pub fn encode(&self, info: &[u8]) -> Result<Vec<u8>> {
        let k = self.params.info_len;
        if info.len() != k {
            return Err(shape(format!("expected {k} information bits, got {}", info.len())));
        }
        if info.iter().any(|&b| b > 1) {
            return Err(shape("information bits must be 0 or 1"));
        }
        let (parity1, ts1, tp1) = trellis::encode(info);
        let permuted = self.internal.permute(info)?;
        let (parity2, ts2, tp2) = trellis::encode(&permuted);
        let mut tail = [0u8; TAIL_BITS];
        for j in 0..MEMORY {
            tail[2 * j] = ts1[j];
            tail[2 * j + 1] = tp1[j];
            tail[2 * MEMORY + 2 * j] = ts2[j];
            tail[2 * MEMORY + 2 * j + 1] = tp2[j];
        }
        Ok(self.matcher.puncture(info, &tail, &parity1, &parity2))
    }

    pub fn new_state<T: Real>(&self) -> CodecState<T> {
        CodecState {
            feedback: vec![T::zero(); self.params.info_len],
            iteration: 0,
        }
    }

    /// One full iteration: first constituent, then second.
    ///
    /// Systematic extrinsic is the sum of both constituents' extrinsics; parity
    /// and tail extrinsic is the owning constituent's posterior minus its input.
    pub fn decode_iteration<T: Real>(&self, channel: &[T], state: &mut CodecState<T>) -> Result<DecoderOutput<T>> {
        let k = self.params.info_len;
        if state.feedback.len() != k {
            return Err(Error::Usage("decoder state was not created for this code".into()));
        }
        if channel.len() != self.params.codeword_len {
            return Err(shape(format!(
                "expected {} channel LLRs, got {}",
                self.params.codeword_len,
                channel.len()
            )));
        }
        let rx = self.matcher.depuncture(channel, T::zero());
        let tail1 = split_tail(&rx.tail[..2 * MEMORY]);
        let tail2 = split_tail(&rx.tail[2 * MEMORY..]);

        let mut post1 = ConstituentPosteriors::default();
        log_map(&rx.systematic, &state.feedback, &rx.parity1, &tail1.0, &tail1.1, &mut post1);
        let ext1: Vec<T> = (0..k)
            .map(|i| (post1.systematic[i] - rx.systematic[i] - state.feedback[i]).clamp_llr())
            .collect();

        let sys2 = self.internal.permute(&rx.systematic)?;
        let apriori2 = self.internal.permute(&ext1)?;
        let mut post2 = ConstituentPosteriors::default();
        log_map(&sys2, &apriori2, &rx.parity2, &tail2.0, &tail2.1, &mut post2);
        let ext2_permuted: Vec<T> = (0..k)
            .map(|i| (post2.systematic[i] - sys2[i] - apriori2[i]).clamp_llr())
            .collect();
        let ext2 = self.internal.unpermute(&ext2_permuted)?;

        let app: Vec<T> = (0..k).map(|i| rx.systematic[i] + ext1[i] + ext2[i]).collect();

        let mut extrinsic = Vec::with_capacity(self.params.codeword_len);
        extrinsic.extend((0..k).map(|i| (ext1[i] + ext2[i]).clamp_llr()));
        for j in 0..MEMORY {
            extrinsic.push((post1.systematic[k + j] - tail1.0[j]).clamp_llr());
            extrinsic.push((post1.parity[k + j] - tail1.1[j]).clamp_llr());
        }
        for j in 0..MEMORY {
            extrinsic.push((post2.systematic[k + j] - tail2.0[j]).clamp_llr());
            extrinsic.push((post2.parity[k + j] - tail2.1[j]).clamp_llr());
        }
        extrinsic.extend(self.matcher.survivors().iter().map(|&(stream, i)| {
            match stream {
                ParityStream::First => post1.parity[i] - rx.parity1[i],
                ParityStream::Second => post2.parity[i] - rx.parity2[i],
            }
            .clamp_llr()
        }));

        state.feedback = ext2;
        state.iteration += 1;
        Ok(DecoderOutput { extrinsic, app })
    }

    /// Runs `iterations` decoding iterations on fixed channel LLRs.
    pub fn decode<T: Real>(&self, channel: &[T], iterations: usize) -> Result<DecoderOutput<T>> {
        let mut state = self.new_state();
        let mut out = None;
        for _ in 0..iterations.max(1) {
            out = Some(self.decode_iteration(channel, &mut state)?);
        }
        Ok(out.expect("at least one iteration"))
    }
}

fn split_tail<T: Copy + Default>(tail: &[T]) -> ([T; MEMORY], [T; MEMORY]) {
    let mut sys = [T::default(); MEMORY];
    let mut par = [T::default(); MEMORY];
    for j in 0..MEMORY {
        sys[j] = tail[2 * j];
        par[j] = tail[2 * j + 1];
    }
    (sys, par)
}

/// Bit is 1 iff its LLR is strictly positive.
pub fn hard_decision<T: Real>(llrs: &[T]) -> Vec<u8> {
    llrs.iter().map(|&l| u8::from(l > T::zero())).collect()
}
