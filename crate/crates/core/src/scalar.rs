//! Scalar abstraction shared by every algebraic routine in the crate.
//!
//! The certified path runs on [`Rational`](crate::Rational); `f64` is
//! supported for quick exploratory runs where rounding is acceptable.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, Signed, ToPrimitive};

/// A field element usable as series coefficient, lattice value and mesh spacing.
pub trait Scalar:
    Clone + Debug + Display + PartialEq + PartialOrd + Num + Signed + Send + Sync + 'static
{
    fn from_i64(n: i64) -> Self;

    fn from_bigint(n: &BigInt) -> Self;

    /// Lossy conversion, used only when reporting.
    fn to_f64(&self) -> f64;

    /// Whether arithmetic is exact, so that "residual == 0" is a certificate.
    const EXACT: bool;
}

impl Scalar for BigRational {
    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn from_bigint(n: &BigInt) -> Self {
        BigRational::from_integer(n.clone())
    }

    fn to_f64(&self) -> f64 {
        // Ratio::to_f64 rounds correctly even when numerator and denominator overflow f64.
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    const EXACT: bool = true;
}

impl Scalar for f64 {
    fn from_i64(n: i64) -> Self {
        n as f64
    }

    fn from_bigint(n: &BigInt) -> Self {
        ToPrimitive::to_f64(n).unwrap_or(f64::INFINITY)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    const EXACT: bool = false;
}

/// `x^k` for a nonnegative exponent; `0^0 = 1`.
pub fn pow_usize<T: Scalar>(x: &T, k: usize) -> T {
    let mut acc = T::one();
    let mut base = x.clone();
    let mut e = k;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base.clone();
        }
        e >>= 1;
        if e > 0 {
            base = base.clone() * base;
        }
    }
    acc
}

/// `x^k` for any integer exponent. Negative exponents require `x != 0`.
pub fn pow_i64<T: Scalar>(x: &T, k: i64) -> T {
    if k >= 0 {
        pow_usize(x, k as usize)
    } else {
        T::one() / pow_usize(x, k.unsigned_abs() as usize)
    }
}

pub(crate) fn from_usize<T: Scalar>(n: usize) -> T {
    T::from_i64(n as i64)
}
