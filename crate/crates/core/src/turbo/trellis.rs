//! Eight-state recursive systematic convolutional code with feedback
//! `1 + D^2 + D^3` and feedforward `1 + D + D^3`.
//!
//! The state packs the shift register as `d1 | d2 << 1 | d3 << 2`, `d1` being the
//! most recent feedback bit.

pub const STATES: usize = 8;
pub const MEMORY: usize = 3;

#[inline]
const fn regs(state: usize) -> (usize, usize, usize) {
    (state & 1, (state >> 1) & 1, (state >> 2) & 1)
}

/// `(next_state, parity)` for input bit `u` from `state`.
#[inline]
pub const fn step(state: usize, u: usize) -> (usize, usize) {
    let (d1, d2, d3) = regs(state);
    let a = u ^ d2 ^ d3;
    let parity = a ^ d1 ^ d3;
    let next = a | (d1 << 1) | (d2 << 2);
    (next, parity)
}

/// Input that zeroes the feedback, driving the register towards state 0.
#[inline]
pub const fn tail_input(state: usize) -> usize {
    let (_, d2, d3) = regs(state);
    d2 ^ d3
}

const fn build_next() -> [[usize; 2]; STATES] {
    let mut t = [[0; 2]; STATES];
    let mut s = 0;
    while s < STATES {
        t[s][0] = step(s, 0).0;
        t[s][1] = step(s, 1).0;
        s += 1;
    }
    t
}

const fn build_parity() -> [[usize; 2]; STATES] {
    let mut t = [[0; 2]; STATES];
    let mut s = 0;
    while s < STATES {
        t[s][0] = step(s, 0).1;
        t[s][1] = step(s, 1).1;
        s += 1;
    }
    t
}

pub const NEXT: [[usize; 2]; STATES] = build_next();
pub const PARITY: [[usize; 2]; STATES] = build_parity();

/// Encodes `bits` from state 0 and appends the three termination steps.
///
/// Returns `(parity, tail_systematic, tail_parity)`.
pub fn encode(bits: &[u8]) -> (Vec<u8>, [u8; MEMORY], [u8; MEMORY]) {
    let mut state = 0;
    let mut parity = Vec::with_capacity(bits.len());
    for &b in bits {
        let (next, p) = step(state, b as usize);
        parity.push(p as u8);
        state = next;
    }
    let mut tail_sys = [0u8; MEMORY];
    let mut tail_par = [0u8; MEMORY];
    for j in 0..MEMORY {
        let u = tail_input(state);
        let (next, p) = step(state, u);
        tail_sys[j] = u as u8;
        tail_par[j] = p as u8;
        state = next;
    }
    debug_assert_eq!(state, 0);
    (parity, tail_sys, tail_par)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tail_terminates_from_every_state() {
        for s in 0..STATES {
            let mut state = s;
            for _ in 0..MEMORY {
                state = step(state, tail_input(state)).0;
            }
            assert_eq!(state, 0);
        }
    }

    #[test]
    fn transitions_are_a_permutation_per_input() {
        for u in 0..2 {
            let mut seen = [false; STATES];
            for s in 0..STATES {
                seen[NEXT[s][u]] = true;
            }
            assert!(seen.iter().all(|&x| x));
        }
    }

    #[test]
    fn impulse_response() {
        // Single 1 followed by zeros: the feedback polynomial 1 + D^2 + D^3 gives a
        // period-7 recursive sequence; parity is that sequence filtered by 1 + D + D^3.
        let mut bits = vec![0u8; 14];
        bits[0] = 1;
        let (parity, _, _) = encode(&bits);
        let mut a = vec![0u8; 14];
        for k in 0..14 {
            let d2 = if k >= 2 { a[k - 2] } else { 0 };
            let d3 = if k >= 3 { a[k - 3] } else { 0 };
            a[k] = bits[k] ^ d2 ^ d3;
        }
        let expected: Vec<u8> = (0..14)
            .map(|k| a[k] ^ if k >= 1 { a[k - 1] } else { 0 } ^ if k >= 3 { a[k - 3] } else { 0 })
            .collect();
        assert_eq!(parity, expected);
        assert_eq!(&a[0..7], &a[7..14]);
    }
}
