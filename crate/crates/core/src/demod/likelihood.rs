//! Super-symbol log-likelihoods `ln p(y | q1, q2)` for noncoherent reception.
//!
//! Every density is expressed relative to the noise-only density of the
//! observation, so the four cases (amplitude CSI or none, distinct or equal
//! tones) share one reference and can be mixed in a single table.

use num_complex::Complex;

use super::bessel::ln_i0;
use crate::error::{param, shape, Result};
use crate::fsk::{ModParams, SuperSymbol};
use crate::scalar::Real;

/// `M^2` log-likelihoods indexed by `q1 * M + q2`.
#[derive(Debug, Clone, PartialEq)]
pub struct SuperSymbolLikelihoods<T> {
    params: ModParams,
    pub(crate) values: Vec<T>,
}

impl<T: Real> SuperSymbolLikelihoods<T> {
    pub fn new(params: ModParams, values: Vec<T>) -> Result<Self> {
        if values.len() != params.super_symbol_count() {
            return Err(shape(format!(
                "likelihood table has {} entries, expected {}",
                values.len(),
                params.super_symbol_count()
            )));
        }
        Ok(Self { params, values })
    }

    pub fn params(&self) -> ModParams {
        self.params
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    #[inline]
    pub fn get(&self, q: SuperSymbol) -> T {
        self.values[q.flat_index(&self.params)]
    }

    /// Table computed with fading amplitudes known.
    pub fn with_amplitudes(y: &[Complex<T>], a1: T, a2: T, noise_psd: T, params: ModParams) -> Result<Self> {
        check_column(y, &params)?;
        if !(noise_psd > T::zero()) {
            return Err(param("noise spectral density must be positive"));
        }
        let mut values = vec![T::zero(); params.super_symbol_count()];
        fill_csi(y, a1, a2, noise_psd, &mut values);
        Ok(Self { params, values })
    }

    /// Table computed from average energies only.
    pub fn with_energies(y: &[Complex<T>], e1: T, e2: T, noise_psd: T, params: ModParams) -> Result<Self> {
        check_column(y, &params)?;
        check_energies(e1, e2, noise_psd)?;
        let mut values = vec![T::zero(); params.super_symbol_count()];
        fill_nocsi(y, e1, e2, noise_psd, &mut values);
        Ok(Self { params, values })
    }
}

fn check_column<T>(y: &[Complex<T>], params: &ModParams) -> Result<()> {
    if y.len() != params.mod_order() {
        return Err(shape(format!(
            "observation has {} entries, expected {}",
            y.len(),
            params.mod_order()
        )));
    }
    Ok(())
}

fn check_energies<T: Real>(e1: T, e2: T, noise_psd: T) -> Result<()> {
    if !(e1 > T::zero() && e2 > T::zero() && noise_psd > T::zero()) {
        return Err(param("energies and noise spectral density must be positive"));
    }
    Ok(())
}

fn check_tones<T>(y: &[Complex<T>], q: SuperSymbol) -> Result<()> {
    if q.q1.index() >= y.len() || q.q2.index() >= y.len() {
        return Err(shape("super-symbol outside the observation"));
    }
    Ok(())
}

/// Amplitude-CSI log-likelihood of one super-symbol.
///
/// Distinct tones: `-(a1^2 + a2^2)/N0 + ln I0(2|y_q1| a1/N0) + ln I0(2|y_q2| a2/N0)`.
/// Equal tones use the combined amplitude `sqrt(a1^2 + a2^2)` in a single term,
/// which approximates the marginal over the unknown relative phase.
pub fn super_symbol_loglik_csi<T: Real>(y: &[Complex<T>], a1: T, a2: T, noise_psd: T, q: SuperSymbol) -> Result<T> {
    if !(noise_psd > T::zero()) {
        return Err(param("noise spectral density must be positive"));
    }
    if a1 < T::zero() || a2 < T::zero() {
        return Err(param("fading amplitudes must be nonnegative"));
    }
    check_tones(y, q)?;
    let two = T::lit(2.0);
    let ln_i0t = |x: T| T::lit(ln_i0(x.to_f64().unwrap_or(0.0)));
    if q.is_same_tone() {
        let a_sq = a1 * a1 + a2 * a2;
        let a = a_sq.sqrt();
        Ok(-a_sq / noise_psd + ln_i0t(two * y[q.q1.index()].norm() * a / noise_psd))
    } else {
        Ok(-(a1 * a1 + a2 * a2) / noise_psd
            + (ln_i0t(two * y[q.q1.index()].norm() * a1 / noise_psd)
                + ln_i0t(two * y[q.q2.index()].norm() * a2 / noise_psd)))
    }
}

/// Log-likelihood of one super-symbol with only average energies known.
///
/// A tone carrying Rayleigh energy `E` contributes
/// `ln(N0/(N0+E)) + |y|^2 E / (N0 (N0 + E))`. Equal tones combine to energy
/// `E1 + E2`, which is exact for Rayleigh fading.
///
/// The widely quoted distinct-tone form writes the prefactor as
/// `[(1/(E1 E2))(1/E1 + 1/N0)(1/E2 + 1/N0)]^{-1}`, which is larger than the one
/// used here by `(E1 E2)^2`. That factor does not cancel against the equal-tone
/// entries, so this implementation uses the normalized prefactor; the two agree
/// whenever `E1 E2 = 1`.
pub fn super_symbol_loglik_nocsi<T: Real>(y: &[Complex<T>], e1: T, e2: T, noise_psd: T, q: SuperSymbol) -> Result<T> {
    check_energies(e1, e2, noise_psd)?;
    check_tones(y, q)?;
    if q.is_same_tone() {
        let e = e1 + e2;
        let prefactor = -(e.ln() + (e.recip() + noise_psd.recip()).ln());
        Ok(prefactor + y[q.q1.index()].norm_sqr() * e / (noise_psd * noise_psd + noise_psd * e))
    } else {
        Ok(rayleigh_tone(y[q.q1.index()].norm_sqr(), e1, noise_psd)
            + rayleigh_tone(y[q.q2.index()].norm_sqr(), e2, noise_psd))
    }
}

#[inline]
fn rayleigh_tone<T: Real>(power: T, energy: T, noise_psd: T) -> T {
    (noise_psd / (noise_psd + energy)).ln() + power * energy / (noise_psd * (noise_psd + energy))
}

/// Fills a table with amplitude-CSI values. Only `3M` Bessel evaluations are needed.
pub(crate) fn fill_csi<T: Real>(y: &[Complex<T>], a1: T, a2: T, noise_psd: T, out: &mut [T]) {
    let m = y.len();
    let n0 = noise_psd.to_f64().unwrap_or(1.0);
    let a1f = a1.to_f64().unwrap_or(0.0);
    let a2f = a2.to_f64().unwrap_or(0.0);
    let a_sq = a1f * a1f + a2f * a2f;
    let a = a_sq.sqrt();
    let mut t1 = vec![0.0f64; m];
    let mut t2 = vec![0.0f64; m];
    let mut same = vec![0.0f64; m];
    for (i, yi) in y.iter().enumerate() {
        let r = 2.0 * yi.norm().to_f64().unwrap_or(0.0) / n0;
        t1[i] = ln_i0(r * a1f);
        t2[i] = ln_i0(r * a2f);
        same[i] = ln_i0(r * a);
    }
    let base = -a_sq / n0;
    for q1 in 0..m {
        for q2 in 0..m {
            let v = if q1 == q2 { base + same[q1] } else { base + (t1[q1] + t2[q2]) };
            out[q1 * m + q2] = T::lit(v);
        }
    }
}

/// Fills a table with energy-only values.
pub(crate) fn fill_nocsi<T: Real>(y: &[Complex<T>], e1: T, e2: T, noise_psd: T, out: &mut [T]) {
    let m = y.len();
    let e = e1 + e2;
    let same_prefactor = -(e.ln() + (e.recip() + noise_psd.recip()).ln());
    let same_gain = e / (noise_psd * noise_psd + noise_psd * e);
    for q1 in 0..m {
        let p1 = y[q1].norm_sqr();
        let r1 = rayleigh_tone(p1, e1, noise_psd);
        for q2 in 0..m {
            out[q1 * m + q2] = if q1 == q2 {
                same_prefactor + p1 * same_gain
            } else {
                r1 + rayleigh_tone(y[q2].norm_sqr(), e2, noise_psd)
            };
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::demod::bessel::log_bessel_i0;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn params(m: usize) -> ModParams {
        ModParams::new(m).unwrap()
    }

    #[test]
    fn zero_amplitude_is_log_one() {
        let y = [c(0.3, -1.2), c(2.0, 0.5), c(0.0, 0.1), c(-1.0, 1.0)];
        for q1 in 0..4 {
            for q2 in 0..4 {
                let v = super_symbol_loglik_csi(&y, 0.0, 0.0, 0.8, SuperSymbol::new(q1, q2)).unwrap();
                assert_eq!(v, 0.0);
            }
        }
    }

    #[test]
    fn csi_distinct_substitution() {
        let y = [c(1.0, 0.0), c(0.0, 1.0)];
        let v = super_symbol_loglik_csi(&y, 1.0, 1.0, 1.0, SuperSymbol::new(0, 1)).unwrap();
        let expected = -2.0 + 2.0 * log_bessel_i0(2.0f64).unwrap();
        assert!((v - expected).abs() < 1e-14);
        assert!((v - (-0.352_012_917_034_087_4)).abs() < 1e-12);
    }

    #[test]
    fn csi_same_tone_uses_combined_amplitude() {
        let y = [c(0.5, 0.5), c(0.1, 0.0)];
        let (a1, a2, n0) = (0.6f64, 0.8, 0.5);
        let v = super_symbol_loglik_csi(&y, a1, a2, n0, SuperSymbol::new(0, 0)).unwrap();
        let a = 1.0f64; // sqrt(0.36 + 0.64)
        let expected = -a * a / n0 + log_bessel_i0(2.0 * y[0].norm() * a / n0).unwrap();
        assert!((v - expected).abs() < 1e-14);
    }

    #[test]
    fn csi_swap_symmetry_for_equal_amplitudes() {
        let y = [c(0.3, -1.2), c(2.0, 0.5), c(0.0, 0.1), c(-1.0, 1.0)];
        let t = SuperSymbolLikelihoods::with_amplitudes(&y, 0.9, 0.9, 0.4, params(4)).unwrap();
        for q1 in 0..4 {
            for q2 in 0..4 {
                assert_eq!(t.get(SuperSymbol::new(q1, q2)), t.get(SuperSymbol::new(q2, q1)));
            }
        }
    }

    #[test]
    fn parameter_errors() {
        let y = [c(1.0, 0.0), c(0.0, 1.0)];
        let q = SuperSymbol::new(0, 1);
        assert!(super_symbol_loglik_csi(&y, 1.0, 1.0, 0.0, q).is_err());
        assert!(super_symbol_loglik_csi(&y, -1.0, 1.0, 1.0, q).is_err());
        assert!(super_symbol_loglik_nocsi(&y, 0.0, 1.0, 1.0, q).is_err());
        assert!(super_symbol_loglik_nocsi(&y, 1.0, 1.0, -1.0, q).is_err());
        assert!(super_symbol_loglik_nocsi(&y, 1.0, 1.0, 1.0, SuperSymbol::new(0, 2)).is_err());
        assert!(SuperSymbolLikelihoods::with_energies(&y, 1.0, 1.0, 1.0, params(4)).is_err());
    }

    #[test]
    fn nocsi_zero_observation_is_flat_over_distinct_pairs() {
        let y = [c(0.0, 0.0); 8];
        let t = SuperSymbolLikelihoods::with_energies(&y, 1.3, 0.7, 0.9, params(8)).unwrap();
        let reference = t.get(SuperSymbol::new(0, 1));
        for q1 in 0..8 {
            for q2 in 0..8 {
                if q1 != q2 {
                    assert!((t.get(SuperSymbol::new(q1, q2)) - reference).abs() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn nocsi_distinct_substitution() {
        let y = [c(1.0, 0.0), c(0.0, -1.0)];
        let v = super_symbol_loglik_nocsi(&y, 1.0, 1.0, 1.0, SuperSymbol::new(0, 1)).unwrap();
        let printed_prefactor = -((1.0f64 / (1.0 * 1.0)) * (1.0 + 1.0) * (1.0 + 1.0)).ln();
        // Exponent term: 1*1/(1*2) + 1*1/(1*2) = 1.
        assert!((v - (printed_prefactor + 1.0)).abs() < 1e-14);
    }

    #[test]
    fn nocsi_distinct_differs_from_printed_form_by_energy_product() {
        let y = [c(0.4, 0.2), c(-0.3, 1.1)];
        let (e1, e2, n0) = (2.5f64, 0.7, 0.6);
        let v = super_symbol_loglik_nocsi(&y, e1, e2, n0, SuperSymbol::new(1, 0)).unwrap();
        let printed = -((1.0 / (e1 * e2)) * (1.0 / e1 + 1.0 / n0) * (1.0 / e2 + 1.0 / n0)).ln()
            + y[1].norm_sqr() * e1 / (n0 * (n0 + e1))
            + y[0].norm_sqr() * e2 / (n0 * (n0 + e2));
        assert!((printed - v - 2.0 * (e1 * e2).ln()).abs() < 1e-12);
    }

    #[test]
    fn nocsi_same_tone_formula() {
        let y = [c(0.4, 0.2), c(-0.3, 1.1)];
        let (e1, e2, n0) = (2.5f64, 0.7, 0.6);
        let v = super_symbol_loglik_nocsi(&y, e1, e2, n0, SuperSymbol::new(1, 1)).unwrap();
        let e = e1 + e2;
        let direct = ((1.0 / e) / (1.0 / e + 1.0 / n0)).ln() + y[1].norm_sqr() * e / (n0 * n0 + n0 * e);
        assert!((v - direct).abs() < 1e-14);
    }

    #[test]
    fn tables_match_pointwise_functions() {
        let y = [c(0.3, -1.2), c(2.0, 0.5), c(0.0, 0.1), c(-1.0, 1.0)];
        let p = params(4);
        let csi = SuperSymbolLikelihoods::with_amplitudes(&y, 0.7, 1.4, 0.3, p).unwrap();
        let nocsi = SuperSymbolLikelihoods::with_energies(&y, 1.1, 0.9, 0.3, p).unwrap();
        for i in 0..16 {
            let q = SuperSymbol::from_flat_index(i, &p);
            let a = super_symbol_loglik_csi(&y, 0.7, 1.4, 0.3, q).unwrap();
            let b = super_symbol_loglik_nocsi(&y, 1.1, 0.9, 0.3, q).unwrap();
            assert!((csi.values()[i] - a).abs() < 1e-12);
            assert!((nocsi.values()[i] - b).abs() < 1e-12);
        }
    }
}
