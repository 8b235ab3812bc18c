//! The Jacobian logarithm `ln(e^a + e^b)`, shared by the demapper and the decoder.

use crate::scalar::Real;

/// `max(a, b) + ln(1 + exp(-|a - b|))`. `-inf` is the identity element.
#[inline]
pub fn max_star<T: Real>(a: T, b: T) -> T {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if lo == T::neg_infinity() {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// Left-to-right n-ary reduction; an empty input gives `-inf`.
#[inline]
pub fn max_star_all<T: Real, I: IntoIterator<Item = T>>(values: I) -> T {
    values.into_iter().fold(T::neg_infinity(), max_star)
}
