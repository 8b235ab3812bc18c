//! Soft mapping from super-symbol likelihoods and network-bit priors to
//! extrinsic network-bit LLRs.
//!
//! LLRs are `ln P(c=1)/P(c=0)`. Super-symbols are first grouped by network label
//! `q1 ^ q2` (max-star over ascending super-symbol index within each group); the
//! bit LLRs are then formed over the `M` labels in ascending order.

use super::likelihood::SuperSymbolLikelihoods;
use crate::error::{shape, Result};
use crate::fsk::ModParams;
use crate::maxstar::max_star;
use crate::scalar::Real;

/// Collapses an `M^2` table to `M` per-label log-likelihoods.
pub fn label_likelihoods<T: Real>(table: &SuperSymbolLikelihoods<T>, out: &mut [T]) {
    let m = table.params().mod_order();
    debug_assert_eq!(out.len(), m);
    out.fill(T::neg_infinity());
    for (index, &v) in table.values().iter().enumerate() {
        let label = (index / m) ^ (index % m);
        out[label] = max_star(out[label], v);
    }
}

/// Extrinsic LLRs of the `mu` bits of one symbol from per-label log-likelihoods.
pub fn somap_from_labels<T: Real>(label_ll: &[T], priors: &[T], out: &mut [T]) {
    let mu = priors.len();
    debug_assert_eq!(label_ll.len(), 1 << mu);
    debug_assert_eq!(out.len(), mu);
    for (k, z) in out.iter_mut().enumerate() {
        let mut num = T::neg_infinity();
        let mut den = T::neg_infinity();
        for (c, &ll) in label_ll.iter().enumerate() {
            let mut metric = ll;
            for (j, &v) in priors.iter().enumerate() {
                if j != k && (c >> j) & 1 == 1 {
                    metric = metric + v;
                }
            }
            if (c >> k) & 1 == 1 {
                num = max_star(num, metric);
            } else {
                den = max_star(den, metric);
            }
        }
        *z = (num - den).clamp_llr();
    }
}

/// Extrinsic network-bit LLRs for one observation. Pass all-zero priors for
/// feed-forward operation.
pub fn dnc_somap<T: Real>(logliks: &SuperSymbolLikelihoods<T>, priors: &[T], params: &ModParams) -> Result<Vec<T>> {
    if logliks.params() != *params {
        return Err(shape("likelihood table built for a different modulation order"));
    }
    if priors.len() != params.bits_per_symbol() {
        return Err(shape(format!(
            "expected {} priors, got {}",
            params.bits_per_symbol(),
            priors.len()
        )));
    }
    let mut labels = vec![T::zero(); params.mod_order()];
    label_likelihoods(logliks, &mut labels);
    let mut out = vec![T::zero(); params.bits_per_symbol()];
    somap_from_labels(&labels, priors, &mut out);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fsk::{network_bits_of, SuperSymbol};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Ratio of explicit sums of exponentials over all super-symbols.
    fn brute_force(logliks: &[f64], priors: &[f64], params: &ModParams) -> Vec<f64> {
        let mu = params.bits_per_symbol();
        (0..mu)
            .map(|k| {
                let (mut num, mut den) = (0.0f64, 0.0f64);
                for (i, &ll) in logliks.iter().enumerate() {
                    let c = network_bits_of(SuperSymbol::from_flat_index(i, params), params);
                    let weight: f64 = (0..mu).filter(|&j| j != k).map(|j| c[j] as f64 * priors[j]).sum();
                    let term = (ll + weight).exp();
                    if c[k] == 1 {
                        num += term;
                    } else {
                        den += term;
                    }
                }
                (num / den).ln()
            })
            .collect()
    }

    fn table(m: usize, values: Vec<f64>) -> SuperSymbolLikelihoods<f64> {
        SuperSymbolLikelihoods::new(ModParams::new(m).unwrap(), values).unwrap()
    }

    #[test]
    fn flat_table_gives_zero() {
        for m in [2usize, 4, 8] {
            let p = ModParams::new(m).unwrap();
            let z = dnc_somap(&table(m, vec![-1.7; m * m]), &vec![0.0; p.bits_per_symbol()], &p).unwrap();
            assert!(z.iter().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn binary_example() {
        let p = ModParams::new(2).unwrap();
        let ln2 = std::f64::consts::LN_2;
        let z = dnc_somap(&table(2, vec![ln2, 0.0, 0.0, ln2]), &[0.0], &p).unwrap();
        // Label 1 = {(0,1),(1,0)}, label 0 = {(0,0),(1,1)}: ln((1+1)/(2+2)).
        assert!((z[0] + ln2).abs() < 1e-15);
        let direct = brute_force(&[ln2, 0.0, 0.0, ln2], &[0.0], &p);
        assert!((z[0] - direct[0]).abs() < 1e-15);
    }

    #[test]
    fn length_errors() {
        let p = ModParams::new(4).unwrap();
        assert!(dnc_somap(&table(4, vec![0.0; 16]), &[0.0], &p).is_err());
        let p8 = ModParams::new(8).unwrap();
        assert!(dnc_somap(&table(4, vec![0.0; 16]), &[0.0; 3], &p8).is_err());
        assert!(SuperSymbolLikelihoods::new(p, vec![0.0f64; 15]).is_err());
    }

    #[test]
    fn matches_brute_force_with_priors() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for m in [2usize, 4, 8] {
            let p = ModParams::new(m).unwrap();
            for _ in 0..200 {
                let ll: Vec<f64> = (0..m * m).map(|_| rng.random_range(-8.0..8.0)).collect();
                let v: Vec<f64> = (0..p.bits_per_symbol()).map(|_| rng.random_range(-6.0..6.0)).collect();
                let z = dnc_somap(&table(m, ll.clone()), &v, &p).unwrap();
                let oracle = brute_force(&ll, &v, &p);
                for (a, b) in z.iter().zip(&oracle) {
                    assert!((a - b).abs() < 1e-9, "{a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn output_is_clamped() {
        let p = ModParams::new(2).unwrap();
        let z = dnc_somap(&table(2, vec![0.0, 500.0, 500.0, 0.0]), &[0.0], &p).unwrap();
        assert_eq!(z[0], 40.0);
        let z = dnc_somap(&table(2, vec![0.0, f64::NEG_INFINITY, f64::NEG_INFINITY, 0.0]), &[0.0], &p).unwrap();
        assert_eq!(z[0], -40.0);
    }

    proptest! {
        #[test]
        fn invariant_to_common_offset(seed in 0u64..1000, offset in -50.0f64..50.0) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let p = ModParams::new(8).unwrap();
            let ll: Vec<f64> = (0..64).map(|_| rng.random_range(-5.0..5.0)).collect();
            let v: Vec<f64> = (0..3).map(|_| rng.random_range(-4.0..4.0)).collect();
            let shifted: Vec<f64> = ll.iter().map(|x| x + offset).collect();
            let a = dnc_somap(&table(8, ll), &v, &p).unwrap();
            let b = dnc_somap(&table(8, shifted), &v, &p).unwrap();
            for (x, y) in a.iter().zip(&b) {
                prop_assert!((x - y).abs() < 1e-9);
            }
        }

        #[test]
        fn extrinsic_ignores_own_prior(seed in 0u64..1000, k in 0usize..3, delta in -10.0f64..10.0) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let p = ModParams::new(8).unwrap();
            let ll: Vec<f64> = (0..64).map(|_| rng.random_range(-5.0..5.0)).collect();
            let v: Vec<f64> = (0..3).map(|_| rng.random_range(-4.0..4.0)).collect();
            let mut w = v.clone();
            w[k] += delta;
            let t = table(8, ll);
            let a = dnc_somap(&t, &v, &p).unwrap();
            let b = dnc_somap(&t, &w, &p).unwrap();
            prop_assert_eq!(a[k], b[k]);
        }

        #[test]
        fn terminal_swap_invariance(seed in 0u64..1000) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let p = ModParams::new(4).unwrap();
            let y: Vec<_> = (0..4)
                .map(|_| num_complex::Complex::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)))
                .collect();
            let t = SuperSymbolLikelihoods::with_amplitudes(&y, 0.8, 0.8, 0.5, p).unwrap();
            let swapped: Vec<f64> = (0..16).map(|i| t.values()[(i % 4) * 4 + i / 4]).collect();
            prop_assert_eq!(t.values(), &swapped[..]);
            let v = [0.7, -1.3];
            let a = dnc_somap(&t, &v, &p).unwrap();
            let b = dnc_somap(&table(4, swapped), &v, &p).unwrap();
            prop_assert_eq!(a, b);
        }
    }
}
