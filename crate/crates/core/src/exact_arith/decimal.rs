use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::{ln_abs, Rational};
use crate::error::{Error, Result};

fn pow10(e: u32) -> BigInt {
    BigInt::from(10u32).pow(e)
}

fn scale10(value: &Rational, e: i64) -> Rational {
    if e >= 0 {
        value * pow10(e as u32)
    } else {
        value / pow10((-e) as u32)
    }
}

/// Round to the nearest integer, ties away from zero. Input must be >= 0.
fn round_half_up(value: &Rational) -> BigInt {
    let (q, r) = value.numer().div_rem(value.denom());
    if r * 2u32 >= *value.denom() {
        q + 1u32
    } else {
        q
    }
}

/// Render `value` correctly rounded to `digits` significant digits, in the
/// style of C's `%g`: trailing zeros are dropped and very small or large
/// magnitudes switch to `d.ddde-N` notation.
pub fn format_significant(value: &Rational, digits: usize) -> String {
    let digits = digits.max(1);
    if value.is_zero() {
        return "0".to_string();
    }
    let magnitude = value.abs();
    let mut exp = (ln_abs(&magnitude) / std::f64::consts::LN_10).floor() as i64;
    // The float estimate may be off by one near powers of ten.
    while scale10(&magnitude, -exp) >= Rational::from_integer(BigInt::from(10)) {
        exp += 1;
    }
    while scale10(&magnitude, -exp) < Rational::from_integer(BigInt::from(1)) {
        exp -= 1;
    }
    let mut mantissa = round_half_up(&scale10(&magnitude, digits as i64 - 1 - exp));
    if mantissa == pow10(digits as u32) {
        mantissa /= 10u32;
        exp += 1;
    }
    let text = mantissa.to_string();
    let sign = if value.is_negative() { "-" } else { "" };

    if exp < -4 || exp >= digits as i64 {
        let (head, tail) = text.split_at(1);
        let tail = tail.trim_end_matches('0');
        if tail.is_empty() {
            format!("{sign}{head}e{exp}")
        } else {
            format!("{sign}{head}.{tail}e{exp}")
        }
    } else if exp < 0 {
        let zeros = "0".repeat((-exp - 1) as usize);
        let body = text.trim_end_matches('0');
        format!("{sign}0.{zeros}{body}")
    } else {
        let (int_part, frac) = text.split_at(exp as usize + 1);
        let frac = frac.trim_end_matches('0');
        if frac.is_empty() {
            format!("{sign}{int_part}")
        } else {
            format!("{sign}{int_part}.{frac}")
        }
    }
}

/// Parse a decimal literal such as `-0.0265258`, `4.22172e-4` or `12`
/// into the exact rational it denotes.
pub fn parse_decimal(text: &str) -> Result<Rational> {
    let bad = || Error::InvalidArgument(format!("not a decimal number: {text:?}"));
    let text = text.trim();
    let (mantissa, exp) = match text.find(['e', 'E']) {
        Some(i) => (&text[..i], text[i + 1..].parse::<i64>().map_err(|_| bad())?),
        None => (text, 0),
    };
    let (negative, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: BigInt = format!("{int_part}{frac}0").parse().map_err(|_| bad())?;
    let mut value = scale10(
        &Rational::from_integer(digits),
        exp - frac.len() as i64 - 1,
    );
    if negative {
        value = -value;
    }
    Ok(value)
}

/// Parse `a/b` or a decimal literal.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let Some((num, den)) = text.split_once('/') else {
        return parse_decimal(text);
    };
    let bad = || Error::InvalidArgument(format!("not a fraction: {text:?}"));
    let num: BigInt = num.trim().parse().map_err(|_| bad())?;
    let den: BigInt = den.trim().parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::InvalidArgument(format!("zero denominator in {text:?}")));
    }
    Ok(Rational::new(num, den))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::rational;

    #[test]
    fn fractions_and_decimals() {
        assert_eq!(parse_rational("3/4").unwrap(), rational(3, 4));
        assert_eq!(parse_rational(" -6/8 ").unwrap(), rational(-3, 4));
        assert_eq!(parse_rational("-0.25").unwrap(), rational(-1, 4));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("1/2/3").is_err());
    }

    #[test]
    fn rounds_to_significant_digits() {
        assert_eq!(format_significant(&rational(1, 3), 6), "0.333333");
        assert_eq!(format_significant(&rational(2, 3), 6), "0.666667");
        assert_eq!(format_significant(&rational(-1, 8), 2), "-0.13");
        assert_eq!(format_significant(&rational(9999995, 10000000), 6), "1");
        assert_eq!(format_significant(&rational(123456789, 1), 6), "1.23457e8");
        assert_eq!(format_significant(&rational(1234, 1), 6), "1234");
        assert_eq!(format_significant(&rational(1, 100000), 6), "1e-5");
        assert_eq!(format_significant(&rational(-422172, 1000000000), 6), "-0.000422172");
        assert_eq!(format_significant(&rational(0, 1), 6), "0");
    }

    #[test]
    fn parses_decimals() {
        assert_eq!(parse_decimal("-0.0265258").unwrap(), rational(-265258, 10000000));
        assert_eq!(parse_decimal("4.22172e-4").unwrap(), rational(422172, 1000000000));
        assert_eq!(parse_decimal("12").unwrap(), rational(12, 1));
        assert_eq!(parse_decimal(".5").unwrap(), rational(1, 2));
        assert!(parse_decimal("abc").is_err());
        assert!(parse_decimal("").is_err());
    }
}
