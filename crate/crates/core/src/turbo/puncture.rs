//! Rate matching from the native `3K + 12` mother codeword to `L` bits.
//!
//! Transmitted order: `K` systematic bits, the 12 tail bits, then the surviving
//! parity bits. Parity survivors are picked from the merged stream
//! `p1[0], p2[0], p1[1], p2[1], ...` at the evenly spaced positions
//! `floor(j * 2K / P)`, `j = 0..P`, which alternates between the two encoders.

use crate::error::{param, Result};

/// Number of tail bits (three termination steps per encoder, systematic plus parity).
pub const TAIL_BITS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ParityStream {
    First,
    Second,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RateMatcher {
    info_len: usize,
    survivors: Vec<(ParityStream, usize)>,
}

impl RateMatcher {
    pub fn new(info_len: usize, codeword_len: usize) -> Result<Self> {
        let min = info_len + TAIL_BITS;
        let max = 3 * info_len + TAIL_BITS;
        if codeword_len < min || codeword_len > max {
            return Err(param(format!(
                "codeword length {codeword_len} outside {min}..={max} for {info_len} information bits"
            )));
        }
        let kept = codeword_len - min;
        let merged = 2 * info_len;
        let survivors = (0..kept)
            .map(|j| {
                let m = j * merged / kept;
                let stream = if m % 2 == 0 { ParityStream::First } else { ParityStream::Second };
                (stream, m / 2)
            })
            .collect();
        Ok(Self { info_len, survivors })
    }

    pub fn survivors(&self) -> &[(ParityStream, usize)] {
        &self.survivors
    }

    pub fn codeword_len(&self) -> usize {
        self.info_len + TAIL_BITS + self.survivors.len()
    }

    /// Offset of the first parity survivor in the transmitted codeword.
    pub fn parity_offset(&self) -> usize {
        self.info_len + TAIL_BITS
    }

    pub fn puncture<X: Copy>(&self, systematic: &[X], tail: &[X; TAIL_BITS], parity1: &[X], parity2: &[X]) -> Vec<X> {
        let mut out = Vec::with_capacity(self.codeword_len());
        out.extend_from_slice(systematic);
        out.extend_from_slice(tail);
        out.extend(self.survivors.iter().map(|&(stream, i)| match stream {
            ParityStream::First => parity1[i],
            ParityStream::Second => parity2[i],
        }));
        out
    }

    /// Splits a transmitted-order vector into systematic, tail and full-length
    /// parity streams; punctured positions receive `fill`.
    pub fn depuncture<X: Copy>(&self, received: &[X], fill: X) -> Depunctured<X> {
        let k = self.info_len;
        let mut parity1 = vec![fill; k];
        let mut parity2 = vec![fill; k];
        let offset = self.parity_offset();
        for (j, &(stream, i)) in self.survivors.iter().enumerate() {
            match stream {
                ParityStream::First => parity1[i] = received[offset + j],
                ParityStream::Second => parity2[i] = received[offset + j],
            }
        }
        let mut tail = [fill; TAIL_BITS];
        tail.copy_from_slice(&received[k..k + TAIL_BITS]);
        Depunctured {
            systematic: received[..k].to_vec(),
            tail,
            parity1,
            parity2,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Depunctured<X> {
    pub systematic: Vec<X>,
    /// `x1, z1, x1, z1, x1, z1, x2, z2, x2, z2, x2, z2`.
    pub tail: [X; TAIL_BITS],
    pub parity1: Vec<X>,
    pub parity2: Vec<X>,
}
