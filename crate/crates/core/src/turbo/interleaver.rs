//! Permutations: the UMTS turbo-internal interleaver and the outer channel
//! interleaver.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{param, shape, Result};

/// Seed of the outer channel interleaver.
pub const CHANNEL_INTERLEAVER_SEED: u64 = 0x7477_7263_5049_0001;

/// A bijection on `0..n`. Applying it maps `x` to `y` with `y[i] = x[forward[i]]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InterleaverMap {
    forward: Vec<usize>,
    inverse: Vec<usize>,
}

impl InterleaverMap {
    pub fn from_forward(forward: Vec<usize>) -> Result<Self> {
        let mut inverse = vec![usize::MAX; forward.len()];
        for (i, &f) in forward.iter().enumerate() {
            if f >= forward.len() || inverse[f] != usize::MAX {
                return Err(param("index list is not a permutation"));
            }
            inverse[f] = i;
        }
        Ok(Self { forward, inverse })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            forward: (0..n).collect(),
            inverse: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    pub fn forward(&self) -> &[usize] {
        &self.forward
    }

    pub fn inverse(&self) -> &[usize] {
        &self.inverse
    }

    pub fn permute_into<X: Copy>(&self, input: &[X], out: &mut [X]) {
        debug_assert_eq!(input.len(), self.len());
        for (o, &f) in out.iter_mut().zip(&self.forward) {
            *o = input[f];
        }
    }

    pub fn unpermute_into<X: Copy>(&self, input: &[X], out: &mut [X]) {
        debug_assert_eq!(input.len(), self.len());
        for (o, &f) in out.iter_mut().zip(&self.inverse) {
            *o = input[f];
        }
    }

    pub fn permute<X: Copy + Default>(&self, input: &[X]) -> Result<Vec<X>> {
        self.check(input.len())?;
        let mut out = vec![X::default(); input.len()];
        self.permute_into(input, &mut out);
        Ok(out)
    }

    pub fn unpermute<X: Copy + Default>(&self, input: &[X]) -> Result<Vec<X>> {
        self.check(input.len())?;
        let mut out = vec![X::default(); input.len()];
        self.unpermute_into(input, &mut out);
        Ok(out)
    }

    fn check(&self, n: usize) -> Result<()> {
        if n != self.len() {
            return Err(shape(format!("sequence of length {n} for a permutation of {}", self.len())));
        }
        Ok(())
    }
}

/// Pseudo-random permutation of `n` codeword positions from a fixed seed.
pub fn channel_interleaver(n: usize, seed: u64) -> InterleaverMap {
    let mut forward: Vec<usize> = (0..n).collect();
    forward.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    InterleaverMap::from_forward(forward).expect("shuffle yields a permutation")
}

// Primes up to 257 paired with their primitive roots.
const PRIME_ROOTS: [(usize, usize); 52] = [
    (7, 3), (11, 2), (13, 2), (17, 3), (19, 2), (23, 5), (29, 2), (31, 3), (37, 2), (41, 6),
    (43, 3), (47, 5), (53, 2), (59, 2), (61, 2), (67, 2), (71, 7), (73, 5), (79, 3), (83, 2),
    (89, 3), (97, 5), (101, 2), (103, 5), (107, 2), (109, 6), (113, 3), (127, 3), (131, 2),
    (137, 3), (139, 2), (149, 2), (151, 6), (157, 5), (163, 2), (167, 5), (173, 2), (179, 2),
    (181, 2), (191, 19), (193, 5), (197, 2), (199, 3), (211, 2), (223, 3), (227, 2), (229, 6),
    (233, 3), (239, 7), (241, 7), (251, 6), (257, 3),
];

const PATTERN_A: [usize; 20] = [19, 9, 14, 4, 0, 2, 5, 7, 12, 18, 16, 13, 17, 15, 3, 1, 6, 11, 8, 10];
const PATTERN_B: [usize; 20] = [19, 9, 14, 4, 0, 2, 5, 7, 12, 18, 10, 8, 13, 17, 3, 1, 16, 6, 15, 11];

fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn is_prime(n: usize) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// UMTS turbo code internal interleaver (prime-interleaver with inter-row and
/// intra-row permutations, pruned to `k` positions). Valid for `40 <= k <= 5114`.
pub fn build_internal_interleaver(k: usize) -> Result<InterleaverMap> {
    if !(40..=5114).contains(&k) {
        return Err(param(format!("internal interleaver length {k} outside 40..=5114")));
    }
    let rows = if k <= 159 {
        5
    } else if k <= 200 || (481..=530).contains(&k) {
        10
    } else {
        20
    };

    let (p, v, cols) = if (481..=530).contains(&k) {
        (53, 2, 53)
    } else {
        let &(p, v) = PRIME_ROOTS
            .iter()
            .find(|&&(p, _)| k <= rows * (p + 1))
            .expect("prime table covers every valid length");
        let cols = if k <= rows * (p - 1) {
            p - 1
        } else if k <= rows * p {
            p
        } else {
            p + 1
        };
        (p, v, cols)
    };

    // Base sequence for intra-row permutation.
    let mut s = vec![1usize; p - 1];
    for j in 1..p - 1 {
        s[j] = (v * s[j - 1]) % p;
    }

    // Prime integers q_i.
    let mut q = vec![1usize; rows];
    let mut candidate = 6;
    for qi in q.iter_mut().skip(1) {
        loop {
            candidate += 1;
            if is_prime(candidate) && gcd(candidate, p - 1) == 1 {
                break;
            }
        }
        *qi = candidate;
    }

    let pattern: Vec<usize> = match rows {
        5 => (0..5).rev().collect(),
        10 => (0..10).rev().collect(),
        _ if (2281..=2480).contains(&k) || (3161..=3210).contains(&k) => PATTERN_A.to_vec(),
        _ => PATTERN_B.to_vec(),
    };

    let mut r = vec![0usize; rows];
    for i in 0..rows {
        r[pattern[i]] = q[i];
    }

    // Intra-row permutation of each original row.
    let mut intra = vec![vec![0usize; cols]; rows];
    for i in 0..rows {
        let u = &mut intra[i];
        for j in 0..p - 1 {
            let idx = s[(j * r[i]) % (p - 1)];
            if cols == p - 1 {
                u[j] = idx - 1;
            } else {
                u[j] = idx;
            }
        }
        if cols >= p {
            u[p - 1] = 0;
        }
        if cols == p + 1 {
            u[p] = p;
        }
    }
    if cols == p + 1 && k == rows * cols {
        intra[rows - 1].swap(p, 0);
    }

    let mut forward = Vec::with_capacity(k);
    for j in 0..cols {
        for &row in &pattern {
            let idx = row * cols + intra[row][j];
            if idx < k {
                forward.push(idx);
            }
        }
    }
    InterleaverMap::from_forward(forward)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_table_roots_are_primitive() {
        for &(p, v) in &PRIME_ROOTS {
            assert!(is_prime(p));
            let mut x = 1;
            let mut order = 0;
            loop {
                x = x * v % p;
                order += 1;
                if x == 1 {
                    break;
                }
            }
            assert_eq!(order, p - 1, "root {v} of {p}");
        }
    }

    #[test]
    fn internal_is_a_permutation_for_many_lengths() {
        for k in (40..=5114).step_by(37).chain([40, 159, 160, 200, 201, 481, 530, 531, 1229, 2281, 3210, 5114]) {
            let map = build_internal_interleaver(k).unwrap();
            let mut sorted = map.forward().to_vec();
            sorted.sort_unstable();
            assert_eq!(sorted, (0..k).collect::<Vec<_>>(), "k={k}");
        }
    }

    #[test]
    fn out_of_range_lengths() {
        assert!(build_internal_interleaver(39).is_err());
        assert!(build_internal_interleaver(5115).is_err());
    }

    #[test]
    fn round_trip() {
        let map = build_internal_interleaver(1229).unwrap();
        let data: Vec<usize> = (0..1229).map(|i| i * 31 % 1000).collect();
        assert_eq!(map.unpermute(&map.permute(&data).unwrap()).unwrap(), data);
        assert!(map.permute(&data[..10]).is_err());
    }

    #[test]
    fn channel_interleaver_is_fixed() {
        let a = channel_interleaver(2048, CHANNEL_INTERLEAVER_SEED);
        let b = channel_interleaver(2048, CHANNEL_INTERLEAVER_SEED);
        assert_eq!(a, b);
        assert_ne!(a, InterleaverMap::identity(2048));
        assert!(InterleaverMap::from_forward(vec![0, 0, 1]).is_err());
    }
}
