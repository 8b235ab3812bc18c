//! Multiple-access Rayleigh channel: per-symbol independent fading for each
//! terminal plus circularly symmetric complex Gaussian noise.

use num_complex::Complex;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{param, shape, Result};
use crate::fsk::ModulatedFrame;
use crate::scalar::Real;

/// Complex gain `h = amplitude * exp(j * phase)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FadingCoefficient<T> {
    pub amplitude: T,
    pub phase: T,
}

impl<T: Real> FadingCoefficient<T> {
    pub fn from_gain(h: Complex<T>) -> Self {
        let mut phase = h.im.atan2(h.re);
        if phase < T::zero() {
            phase = phase + T::TAU();
        }
        if phase >= T::TAU() {
            phase = T::zero();
        }
        Self {
            amplitude: h.norm(),
            phase,
        }
    }

    #[inline]
    pub fn gain(&self) -> Complex<T> {
        Complex::from_polar(self.amplitude, self.phase)
    }
}

/// Fading sequences of both terminals for one frame, and the noise level.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization<T> {
    pub gains1: Vec<FadingCoefficient<T>>,
    pub gains2: Vec<FadingCoefficient<T>>,
    /// One-sided noise spectral density.
    pub noise_psd: T,
}

impl<T: Real> ChannelRealization<T> {
    pub fn len(&self) -> usize {
        self.gains1.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gains1.is_empty()
    }

    /// Draws independent Rayleigh sequences for both terminals.
    pub fn sample<R: Rng + ?Sized>(
        energy1: T,
        energy2: T,
        noise_psd: T,
        count: usize,
        rng: &mut R,
    ) -> Result<Self> {
        if !(noise_psd > T::zero()) {
            return Err(param("noise spectral density must be positive"));
        }
        let gains1 = sample_fading(energy1, count, rng)?;
        let gains2 = sample_fading(energy2, count, rng)?;
        Ok(Self {
            gains1,
            gains2,
            noise_psd,
        })
    }

    pub fn amplitudes1(&self) -> impl Iterator<Item = T> + '_ {
        self.gains1.iter().map(|g| g.amplitude)
    }

    pub fn amplitudes2(&self) -> impl Iterator<Item = T> + '_ {
        self.gains2.iter().map(|g| g.amplitude)
    }
}

/// Received `M x N_q` matrix, stored column-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservationFrame<T> {
    mod_order: usize,
    samples: Vec<Complex<T>>,
}

impl<T: Real> ObservationFrame<T> {
    pub fn from_columns(mod_order: usize, samples: Vec<Complex<T>>) -> Result<Self> {
        if mod_order == 0 || samples.len() % mod_order != 0 {
            return Err(shape("sample count is not a multiple of the modulation order"));
        }
        Ok(Self { mod_order, samples })
    }

    pub fn mod_order(&self) -> usize {
        self.mod_order
    }

    /// Number of observations (columns).
    pub fn len(&self) -> usize {
        self.samples.len() / self.mod_order
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    #[inline]
    pub fn column(&self, k: usize) -> &[Complex<T>] {
        &self.samples[k * self.mod_order..(k + 1) * self.mod_order]
    }

    pub fn columns(&self) -> impl Iterator<Item = &[Complex<T>]> {
        self.samples.chunks_exact(self.mod_order)
    }
}

#[inline]
pub(crate) fn complex_gaussian<T: Real, R: Rng + ?Sized>(variance: T, rng: &mut R) -> Complex<T> {
    let s = (variance / T::lit(2.0)).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex::new(T::lit(re) * s, T::lit(im) * s)
}

/// Draws `count` independent gains with `E[|h|^2] = energy`.
pub fn sample_fading<T: Real, R: Rng + ?Sized>(
    energy: T,
    count: usize,
    rng: &mut R,
) -> Result<Vec<FadingCoefficient<T>>> {
    if !(energy > T::zero()) {
        return Err(param("symbol energy must be positive"));
    }
    Ok((0..count)
        .map(|_| FadingCoefficient::from_gain(complex_gaussian(energy, rng)))
        .collect())
}

/// `Y = X1 H1 + X2 H2 + N`.
pub fn apply_ma_channel<T: Real, R: Rng + ?Sized>(
    frame1: &ModulatedFrame,
    frame2: &ModulatedFrame,
    realization: &ChannelRealization<T>,
    rng: &mut R,
) -> Result<ObservationFrame<T>> {
    if frame1.params() != frame2.params() {
        return Err(shape("terminals use different modulation parameters"));
    }
    let n = frame1.len();
    if frame2.len() != n || realization.gains1.len() != n || realization.gains2.len() != n {
        return Err(shape(format!(
            "frame lengths {} / {} and realization lengths {} / {} differ",
            n,
            frame2.len(),
            realization.gains1.len(),
            realization.gains2.len()
        )));
    }
    let m = frame1.params().mod_order();
    let mut samples = Vec::with_capacity(m * n);
    for k in 0..n {
        let start = samples.len();
        for _ in 0..m {
            let noise = if realization.noise_psd > T::zero() {
                complex_gaussian(realization.noise_psd, rng)
            } else {
                Complex::new(T::zero(), T::zero())
            };
            samples.push(noise);
        }
        samples[start + frame1.tones()[k].index()] =
            samples[start + frame1.tones()[k].index()] + realization.gains1[k].gain();
        samples[start + frame2.tones()[k].index()] =
            samples[start + frame2.tones()[k].index()] + realization.gains2[k].gain();
    }
    Ok(ObservationFrame { mod_order: m, samples })
}
