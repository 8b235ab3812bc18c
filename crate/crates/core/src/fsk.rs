//! M-ary orthogonal FSK in the discrete unit-vector model, and the network-bit
//! labeling of super-symbols.
//!
//! Labeling is natural binary, least significant bit first: the bit group
//! `[b0, b1, ..., b_{mu-1}]` selects tone `sum b_k 2^k`. Because the labeling is
//! linear over GF(2), the network label of a super-symbol `(q1, q2)` is simply
//! `q1 ^ q2`.

use crate::error::{param, shape, Result};

/// Modulation order and bits per symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ModParams {
    mod_order: usize,
    bits_per_symbol: usize,
}

impl ModParams {
    pub fn new(mod_order: usize) -> Result<Self> {
        if mod_order < 2 || !mod_order.is_power_of_two() {
            return Err(param(format!("modulation order {mod_order} is not a power of two >= 2")));
        }
        Ok(Self {
            mod_order,
            bits_per_symbol: mod_order.trailing_zeros() as usize,
        })
    }

    #[inline]
    pub fn mod_order(&self) -> usize {
        self.mod_order
    }

    #[inline]
    pub fn bits_per_symbol(&self) -> usize {
        self.bits_per_symbol
    }

    /// Number of super-symbols, `M^2`.
    #[inline]
    pub fn super_symbol_count(&self) -> usize {
        self.mod_order * self.mod_order
    }

    /// Codeword length after zero padding to a multiple of `mu`.
    pub fn padded_len(&self, codeword_len: usize) -> usize {
        self.symbol_count(codeword_len) * self.bits_per_symbol
    }

    /// Number of tones needed for a codeword of the given length.
    pub fn symbol_count(&self, codeword_len: usize) -> usize {
        codeword_len.div_ceil(self.bits_per_symbol)
    }
}

/// Index of an FSK tone, `0 <= q < M`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ToneSymbol(pub usize);

impl ToneSymbol {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

/// Pair of tones sent simultaneously by terminal 1 and terminal 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SuperSymbol {
    pub q1: ToneSymbol,
    pub q2: ToneSymbol,
}

impl SuperSymbol {
    pub fn new(q1: usize, q2: usize) -> Self {
        Self {
            q1: ToneSymbol(q1),
            q2: ToneSymbol(q2),
        }
    }

    /// Flat index `q1 * M + q2` used by likelihood tables.
    #[inline]
    pub fn flat_index(&self, params: &ModParams) -> usize {
        self.q1.0 * params.mod_order + self.q2.0
    }

    #[inline]
    pub fn from_flat_index(index: usize, params: &ModParams) -> Self {
        Self::new(index / params.mod_order, index % params.mod_order)
    }

    /// Network label as a tone index (the XOR of the two labels).
    #[inline]
    pub fn network_label(&self) -> usize {
        self.q1.0 ^ self.q2.0
    }

    #[inline]
    pub fn is_same_tone(&self) -> bool {
        self.q1 == self.q2
    }
}

/// Sequence of tones for one codeword.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModulatedFrame {
    params: ModParams,
    tones: Vec<ToneSymbol>,
}

impl ModulatedFrame {
    pub fn from_tones(params: ModParams, tones: Vec<ToneSymbol>) -> Result<Self> {
        if let Some(t) = tones.iter().find(|t| t.0 >= params.mod_order) {
            return Err(param(format!("tone {} outside 0..{}", t.0, params.mod_order)));
        }
        Ok(Self { params, tones })
    }

    pub fn params(&self) -> ModParams {
        self.params
    }

    pub fn tones(&self) -> &[ToneSymbol] {
        &self.tones
    }

    pub fn len(&self) -> usize {
        self.tones.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tones.is_empty()
    }

    /// Column `k` of the `M x N_q` signal matrix: the unit vector `e_q`.
    pub fn column(&self, k: usize) -> Vec<u8> {
        let mut col = vec![0u8; self.params.mod_order];
        col[self.tones[k].0] = 1;
        col
    }

    /// Inverse mapping back to the (padded) codeword.
    pub fn demap(&self) -> Vec<u8> {
        self.tones
            .iter()
            .flat_map(|&t| tone_to_bits(t, &self.params))
            .collect()
    }
}

pub fn map_bits_to_tone(bits: &[u8], params: &ModParams) -> Result<ToneSymbol> {
    if bits.len() != params.bits_per_symbol {
        return Err(shape(format!(
            "expected {} bits per symbol, got {}",
            params.bits_per_symbol,
            bits.len()
        )));
    }
    let mut q = 0usize;
    for (k, &b) in bits.iter().enumerate() {
        match b {
            0 => {}
            1 => q |= 1 << k,
            other => return Err(shape(format!("bit value {other} is not binary"))),
        }
    }
    Ok(ToneSymbol(q))
}

/// Bit group carried by a tone, least significant bit first.
pub fn tone_to_bits(q: ToneSymbol, params: &ModParams) -> impl Iterator<Item = u8> {
    let q = q.0;
    (0..params.bits_per_symbol).map(move |k| ((q >> k) & 1) as u8)
}

/// Maps a codeword to tones, zero padding the tail when `mu` does not divide its length.
pub fn modulate_frame(codeword: &[u8], params: &ModParams) -> Result<ModulatedFrame> {
    if codeword.is_empty() {
        return Err(shape("empty codeword"));
    }
    let mu = params.bits_per_symbol;
    let mut padded = codeword.to_vec();
    padded.resize(params.padded_len(codeword.len()), 0);
    let tones = padded
        .chunks_exact(mu)
        .map(|group| map_bits_to_tone(group, params))
        .collect::<Result<Vec<_>>>()?;
    Ok(ModulatedFrame { params: *params, tones })
}

pub fn network_bits_of(q: SuperSymbol, params: &ModParams) -> Vec<u8> {
    tone_to_bits(ToneSymbol(q.network_label()), params).collect()
}
