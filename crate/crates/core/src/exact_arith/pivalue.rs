use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_traits::Zero;

use super::{format_significant, pow, to_f64, Rational};
use crate::error::{Error, Result};

/// Pi to 70 decimal places.
const PI_DIGITS: &str =
    "31415926535897932384626433832795028841971693993751058209749445923078164";

fn pi_rational() -> &'static Rational {
    static PI: OnceLock<Rational> = OnceLock::new();
    PI.get_or_init(|| {
        let numer = PI_DIGITS.parse().expect("pi digits");
        let denom = num_bigint::BigInt::from(10u32).pow(PI_DIGITS.len() as u32 - 1);
        Rational::new(numer, denom)
    })
}

/// An exact number of the form `coefficient * pi^(-pi_exponent)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PiValue {
    coefficient: Rational,
    pi_exponent: u32,
}

impl PiValue {
    pub fn new(coefficient: Rational, pi_exponent: u32) -> Self {
        let pi_exponent = if coefficient.is_zero() { 0 } else { pi_exponent };
        Self {
            coefficient,
            pi_exponent,
        }
    }

    pub fn zero() -> Self {
        Self::new(Rational::zero(), 0)
    }

    pub fn coefficient(&self) -> &Rational {
        &self.coefficient
    }

    pub fn pi_exponent(&self) -> u32 {
        self.pi_exponent
    }

    pub fn is_zero(&self) -> bool {
        self.coefficient.is_zero()
    }

    /// Sum of two values sharing a pi exponent. Zero is compatible with any
    /// exponent.
    pub fn checked_add(&self, other: &PiValue) -> Result<PiValue> {
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.pi_exponent != other.pi_exponent {
            return Err(Error::PiExponentMismatch(self.pi_exponent, other.pi_exponent));
        }
        Ok(PiValue::new(
            &self.coefficient + &other.coefficient,
            self.pi_exponent,
        ))
    }

    pub fn scale(&self, factor: &Rational) -> PiValue {
        PiValue::new(&self.coefficient * factor, self.pi_exponent)
    }

    /// The value as a rational approximation with relative error below
    /// 1e-65 per power of pi.
    pub fn approximate(&self) -> Rational {
        &self.coefficient / pow(pi_rational(), self.pi_exponent as i32)
    }

    pub fn to_f64(&self) -> f64 {
        to_f64(&self.approximate())
    }

    /// Decimal rendering correctly rounded to `digits` significant digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        format_significant(&self.approximate(), digits)
    }
}

impl fmt::Display for PiValue {
    /// Renders as `-67/160 * pi^-2`; the pi factor is omitted for m = 0.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.coefficient)?;
        if self.pi_exponent > 0 {
            write!(f, " * pi^-{}", self.pi_exponent)?;
        }
        Ok(())
    }
}

impl FromStr for PiValue {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("not a pi-value: {text:?}"));
        let (coef, exponent) = match text.split_once('*') {
            Some((coef, pi)) => {
                let exponent = pi
                    .trim()
                    .strip_prefix("pi^-")
                    .ok_or_else(bad)?
                    .parse::<u32>()
                    .map_err(|_| bad())?;
                (coef.trim(), exponent)
            }
            None => (text.trim(), 0),
        };
        let coefficient = if coef.contains('/') {
            coef.parse::<Rational>().map_err(|_| bad())?
        } else {
            Rational::from_integer(coef.parse().map_err(|_| bad())?)
        };
        if coefficient.denom() <= &num_bigint::BigInt::zero() {
            return Err(bad());
        }
        Ok(PiValue::new(coefficient, exponent))
    }
}

impl std::ops::Neg for PiValue {
    type Output = PiValue;

    fn neg(self) -> PiValue {
        PiValue::new(-self.coefficient, self.pi_exponent)
    }
}

impl std::ops::Mul for &PiValue {
    type Output = PiValue;

    fn mul(self, rhs: &PiValue) -> PiValue {
        PiValue::new(
            &self.coefficient * &rhs.coefficient,
            self.pi_exponent + rhs.pi_exponent,
        )
    }
}

impl From<Rational> for PiValue {
    fn from(value: Rational) -> Self {
        PiValue::new(value, 0)
    }
}

impl Default for PiValue {
    fn default() -> Self {
        PiValue::new(Rational::zero(), 0)
    }
}
