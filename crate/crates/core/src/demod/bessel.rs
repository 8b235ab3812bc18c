//! `ln I0(x)` without overflow over the full range needed by the demodulator.

use crate::error::{Error, Result};
use crate::scalar::Real;

const SERIES_LIMIT: f64 = 15.0;

/// Natural log of the zeroth-order modified Bessel function of the first kind.
pub fn log_bessel_i0<T: Real>(x: T) -> Result<T> {
    let xf = x
        .to_f64()
        .ok_or_else(|| Error::Domain("argument not representable".into()))?;
    if xf.is_nan() || xf < 0.0 {
        return Err(Error::Domain(format!("ln I0 requires x >= 0, got {xf}")));
    }
    Ok(T::lit(ln_i0(xf)))
}

/// Unchecked variant for hot loops; `x` must be nonnegative.
#[inline]
pub(crate) fn ln_i0(x: f64) -> f64 {
    if x < SERIES_LIMIT {
        ln_i0_series(x)
    } else {
        ln_i0_asymptotic(x)
    }
}

// sum (x/2)^(2m) / (m!)^2, all terms positive so summation is well conditioned.
fn ln_i0_series(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut m = 1.0;
    loop {
        term *= q / (m * m);
        sum += term;
        if term < sum * 1e-17 {
            break;
        }
        m += 1.0;
    }
    sum.ln()
}

// I0(x) ~ e^x / sqrt(2 pi x) * sum_k ((2k-1)!!)^2 / (k! (8x)^k), truncated at the
// smallest term. For x >= 15 the smallest term is below 1e-13.
fn ln_i0_asymptotic(x: f64) -> f64 {
    let inv8x = 1.0 / (8.0 * x);
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 1.0;
    loop {
        let next = term * (2.0 * k - 1.0) * (2.0 * k - 1.0) * inv8x / k;
        if next >= term || next < sum * 1e-17 {
            break;
        }
        term = next;
        sum += term;
        k += 1.0;
    }
    x - 0.5 * (std::f64::consts::TAU * x).ln() + sum.ln()
}
