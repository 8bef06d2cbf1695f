//! Exact rational arithmetic, combinatorial numbers, Bernoulli numbers and
//! the `q * pi^-m` value type that carries every exact result in the crate.

mod bernoulli;
mod decimal;
mod pivalue;

pub use bernoulli::bernoulli;
pub use decimal::{format_significant, parse_decimal, parse_rational};
pub use pivalue::PiValue;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision exact fraction, always kept in lowest terms with a
/// positive denominator.
pub type Rational = num_rational::BigRational;

/// Shorthand for `num / den` as a [`Rational`].
pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn integer(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Binomial coefficient C(n, k); zero outside `0 <= k <= n`.
pub fn binomial(n: u32, k: i64) -> Rational {
    if k < 0 || k > n as i64 {
        return Rational::zero();
    }
    let k = (k as u32).min(n - k as u32);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    Rational::from_integer(acc)
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Gamma(n/2) = (n/2 - 1)! for even `n >= 2`.
pub fn half_gamma(n: u32) -> Result<Rational> {
    if n % 2 == 1 {
        return Err(Error::OddDimension(n as i64));
    }
    if n < 2 {
        return Err(Error::DimensionTooSmall(n as i64));
    }
    Ok(Rational::from_integer(factorial(n / 2 - 1)))
}

/// Exact integer power by repeated squaring; negative exponents invert.
pub fn pow(base: &Rational, exp: i32) -> Rational {
    let mut result = Rational::one();
    let mut square = if exp < 0 { base.recip() } else { base.clone() };
    let mut e = exp.unsigned_abs();
    while e > 0 {
        if e & 1 == 1 {
            result *= &square;
        }
        e >>= 1;
        if e > 0 {
            square = &square * &square;
        }
    }
    result
}

/// 2^(-e) as an exact rational.
pub fn inv_pow2(e: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << e as usize)
}

pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

/// The exact rational equal to a finite `f64`.
pub fn from_f64(value: f64) -> Option<Rational> {
    Rational::from_float(value)
}

fn bigint_ln(value: &BigInt) -> f64 {
    let bits = value.bits();
    if bits <= 1000 {
        return value.abs().to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top: BigInt = value.abs() >> shift as usize;
    top.to_f64().unwrap_or(f64::NAN).ln() + shift as f64 * std::f64::consts::LN_2
}

/// Natural log of |value|, valid far outside the `f64` range of the value
/// itself. Returns `-inf` for zero.
pub fn ln_abs(value: &Rational) -> f64 {
    if value.is_zero() {
        return f64::NEG_INFINITY;
    }
    bigint_ln(value.numer()) - bigint_ln(value.denom())
}

/// Sign of a rational as -1, 0 or 1.
pub fn signum(value: &Rational) -> i32 {
    if value.is_zero() {
        0
    } else if value.is_negative() {
        -1
    } else {
        1
    }
}
