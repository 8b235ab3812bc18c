//! Log-MAP (exact max-star) BCJR for one terminated constituent code.

use super::trellis::{MEMORY, NEXT, PARITY, STATES};
use crate::maxstar::max_star;
use crate::scalar::Real;

/// Posterior LLRs of the systematic and parity bit at every trellis step,
/// including the three termination steps.
#[derive(Debug, Clone, Default)]
pub struct ConstituentPosteriors<T> {
    pub systematic: Vec<T>,
    pub parity: Vec<T>,
}

/// Runs the forward-backward recursion.
///
/// `systematic`, `a_priori` and `parity` cover the `K` information steps;
/// the tail slices cover the termination steps, whose inputs are fixed by the
/// state and carry no a-priori term.
pub fn log_map<T: Real>(
    systematic: &[T],
    a_priori: &[T],
    parity: &[T],
    tail_systematic: &[T; MEMORY],
    tail_parity: &[T; MEMORY],
    out: &mut ConstituentPosteriors<T>,
) {
    let k = systematic.len();
    let n = k + MEMORY;
    let ninf = T::neg_infinity();

    let sys_at = |i: usize| if i < k { systematic[i] + a_priori[i] } else { tail_systematic[i - k] };
    let par_at = |i: usize| if i < k { parity[i] } else { tail_parity[i - k] };
    // Branch metric with LLR > 0 favouring 1: u * L_u + p * L_p.
    let gamma = |s: usize, u: usize, lu: T, lp: T| -> T {
        let mut g = T::zero();
        if u == 1 {
            g = g + lu;
        }
        if PARITY[s][u] == 1 {
            g = g + lp;
        }
        g
    };
    let allowed = |i: usize, s: usize, u: usize| i < k || super::trellis::tail_input(s) == u;

    let mut alpha = vec![[ninf; STATES]; n + 1];
    alpha[0][0] = T::zero();
    for i in 0..n {
        let (lu, lp) = (sys_at(i), par_at(i));
        let mut next = [ninf; STATES];
        for s in 0..STATES {
            let a = alpha[i][s];
            if a == ninf {
                continue;
            }
            for u in 0..2 {
                if allowed(i, s, u) {
                    let t = NEXT[s][u];
                    next[t] = max_star(next[t], a + gamma(s, u, lu, lp));
                }
            }
        }
        let norm = next[0].max(next.iter().copied().fold(ninf, T::max));
        for v in next.iter_mut() {
            *v = *v - norm;
        }
        alpha[i + 1] = next;
    }

    let mut beta = [ninf; STATES];
    beta[0] = T::zero();
    out.systematic.clear();
    out.systematic.resize(n, T::zero());
    out.parity.clear();
    out.parity.resize(n, T::zero());
    for i in (0..n).rev() {
        let (lu, lp) = (sys_at(i), par_at(i));
        let mut prev = [ninf; STATES];
        let (mut u1, mut u0, mut p1, mut p0) = (ninf, ninf, ninf, ninf);
        for s in 0..STATES {
            let a = alpha[i][s];
            for u in 0..2 {
                if !allowed(i, s, u) {
                    continue;
                }
                let t = NEXT[s][u];
                let g = gamma(s, u, lu, lp);
                let gb = g + beta[t];
                prev[s] = max_star(prev[s], gb);
                if a == ninf || beta[t] == ninf {
                    continue;
                }
                let metric = a + gb;
                if u == 1 {
                    u1 = max_star(u1, metric);
                } else {
                    u0 = max_star(u0, metric);
                }
                if PARITY[s][u] == 1 {
                    p1 = max_star(p1, metric);
                } else {
                    p0 = max_star(p0, metric);
                }
            }
        }
        out.systematic[i] = (u1 - u0).clamp_llr();
        out.parity[i] = (p1 - p0).clamp_llr();
        let norm = prev.iter().copied().fold(ninf, T::max);
        for v in prev.iter_mut() {
            *v = *v - norm;
        }
        beta = prev;
    }
}

#[cfg(test)]
mod tests {
    use super::super::trellis::encode;
    use super::*;

    /// Exhaustive APP over all 2^K information words.
    fn brute_force(sys: &[f64], la: &[f64], par: &[f64], ts: &[f64; 3], tp: &[f64; 3]) -> (Vec<f64>, Vec<f64>) {
        let k = sys.len();
        let n = k + 3;
        let mut num_u = vec![0.0f64; n];
        let mut den_u = vec![0.0f64; n];
        let mut num_p = vec![0.0f64; n];
        let mut den_p = vec![0.0f64; n];
        for word in 0..(1usize << k) {
            let bits: Vec<u8> = (0..k).map(|i| ((word >> i) & 1) as u8).collect();
            let (parity, tsys, tpar) = encode(&bits);
            let u: Vec<u8> = bits.iter().copied().chain(tsys).collect();
            let p: Vec<u8> = parity.iter().copied().chain(tpar).collect();
            let mut metric = 0.0;
            for i in 0..n {
                let lu = if i < k { sys[i] + la[i] } else { ts[i - k] };
                let lp = if i < k { par[i] } else { tp[i - k] };
                metric += u[i] as f64 * lu + p[i] as f64 * lp;
            }
            let w = metric.exp();
            for i in 0..n {
                if u[i] == 1 { num_u[i] += w } else { den_u[i] += w }
                if p[i] == 1 { num_p[i] += w } else { den_p[i] += w }
            }
        }
        let llr = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x / y).ln()).collect::<Vec<_>>();
        (llr(&num_u, &den_u), llr(&num_p, &den_p))
    }

    #[test]
    fn matches_exhaustive_app() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..5 {
            let k = 8;
            let sys: Vec<f64> = (0..k).map(|_| rng.random_range(-3.0..3.0)).collect();
            let la: Vec<f64> = (0..k).map(|_| rng.random_range(-2.0..2.0)).collect();
            let par: Vec<f64> = (0..k).map(|_| rng.random_range(-3.0..3.0)).collect();
            let ts = [rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0)];
            let tp = [rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0)];
            let mut out = ConstituentPosteriors::default();
            log_map(&sys, &la, &par, &ts, &tp, &mut out);
            let (u, p) = brute_force(&sys, &la, &par, &ts, &tp);
            for i in 0..k + 3 {
                assert!((out.systematic[i] - u[i]).abs() < 1e-9, "u[{i}] {} vs {}", out.systematic[i], u[i]);
                assert!((out.parity[i] - p[i]).abs() < 1e-9, "p[{i}] {} vs {}", out.parity[i], p[i]);
            }
        }
    }

    #[test]
    fn zero_input_gives_zero_information_bits() {
        let k = 20;
        let z = vec![0.0f64; k];
        let mut out = ConstituentPosteriors::default();
        log_map(&z, &z, &z, &[0.0; 3], &[0.0; 3], &mut out);
        assert!(out.systematic[..k].iter().all(|v| v.abs() < 1e-12));
    }
}
