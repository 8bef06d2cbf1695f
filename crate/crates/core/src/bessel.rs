//! Modified Bessel function of the second kind (McDonald function) from
//!
//! ```text
//! K_nu(z) = 2^{-nu-1} z^nu int_0^inf t^{-nu-1} exp(-t - z^2/(4t)) dt
//! ```
//!
//! Half-integer orders use the terminating closed form.

use crate::error::{Error, Result};
use crate::quadrature::{exp_sinh, QuadOptions};

/// If `2 nu` is an odd integer, returns `nu - 1/2` for `nu >= 0`.
fn half_integer_index(nu: f64) -> Option<u32> {
    let twice = 2.0 * nu;
    if twice.fract() == 0.0 && (twice as i64) % 2 == 1 && twice < 200.0 {
        Some(((twice as i64 - 1) / 2) as u32)
    } else {
        None
    }
}

/// K_{m+1/2}(z) = sqrt(pi/(2z)) e^{-z} sum_{i=0}^{m} (m+i)! / (i! (m-i)!) (2z)^{-i}
pub fn bessel_k_half_integer(m: u32, z: f64) -> f64 {
    let mut coef = 1.0;
    let mut sum = 1.0;
    for i in 1..=m {
        // (m+i)!/(i!(m-i)!) from the previous term
        coef *= ((m + i) * (m - i + 1)) as f64 / i as f64;
        sum += coef / (2.0 * z).powi(i as i32);
    }
    (std::f64::consts::PI / (2.0 * z)).sqrt() * (-z).exp() * sum
}

/// K_nu(z) by quadrature of the integral representation, any real order.
pub fn bessel_k_quadrature(order: f64, z: f64) -> Result<f64> {
    let nu = order.abs();
    let q = z * z / 4.0;
    let opts = QuadOptions::default().with_abs_tol(0.0).with_rel_tol(1e-14);
    let integral = exp_sinh(|t| (-(nu + 1.0) * t.ln() - t - q / t).exp(), &opts)?;
    Ok(2f64.powf(-nu - 1.0) * z.powf(nu) * integral.value)
}

/// K_nu(z) for real order and z > 0.
pub fn bessel_k(order: f64, z: f64) -> Result<f64> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::InvalidArgument(format!("bessel_k needs z > 0, got {z}")));
    }
    if !order.is_finite() {
        return Err(Error::InvalidArgument(format!("bessel_k order must be finite, got {order}")));
    }
    let nu = order.abs();
    match half_integer_index(nu) {
        Some(m) => Ok(bessel_k_half_integer(m, z)),
        None => bessel_k_quadrature(nu, z),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent oracle: K_nu(z) = int_0^inf cosh(nu u) exp(-z cosh u) du by
    /// composite Simpson on [0, U], halving the step until stable.
    fn simpson_oracle(nu: f64, z: f64) -> f64 {
        let f = |u: f64| (nu * u).cosh() * (-z * u.cosh()).exp();
        let upper = (40.0 / z + 2.0).acosh() + 1.0;
        let simpson = |n: usize| {
            let h = upper / n as f64;
            let mut s = f(0.0) + f(upper);
            for i in 1..n {
                s += f(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
            }
            s * h / 3.0
        };
        let mut n = 64;
        let mut prev = simpson(n);
        loop {
            n *= 2;
            let next = simpson(n);
            if (next - prev).abs() < 1e-15 * next.abs() || n > 1 << 20 {
                return next;
            }
            prev = next;
        }
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn half_integer_closed_form() {
        let v = bessel_k(0.5, 1.0).unwrap();
        assert!((v - (std::f64::consts::PI / 2.0).sqrt() * (-1f64).exp()).abs() < 1e-15);
        assert!((v - 0.461068).abs() < 1e-6);
        for m in 0..4 {
            for z in [0.3, 1.0, 4.0, 12.0] {
                let closed = bessel_k_half_integer(m, z);
                let quad = bessel_k_quadrature(m as f64 + 0.5, z).unwrap();
                assert!(rel(closed, quad) < 1e-12, "m={m} z={z}");
            }
        }
    }

    #[test]
    fn order_zero_at_one() {
        let v = bessel_k(0.0, 1.0).unwrap();
        assert!(rel(v, simpson_oracle(0.0, 1.0)) < 1e-12);
        assert!((v - 0.421024).abs() < 1e-6);
    }

    #[test]
    fn matches_simpson_oracle() {
        for nu in [0.0, 0.2, 0.3, 0.45, 0.7, 1.0, 2.3] {
            for z in [0.05, 0.5, 1.0, 3.0, 10.0, 25.0] {
                let v = bessel_k(nu, z).unwrap();
                assert!(rel(v, simpson_oracle(nu, z)) < 1e-11, "nu={nu} z={z}: {v}");
            }
        }
    }

    #[test]
    fn symmetric_in_order() {
        for nu in [0.1, 0.5, 1.7] {
            assert_eq!(bessel_k(-nu, 2.0).unwrap(), bessel_k(nu, 2.0).unwrap());
        }
    }

    #[test]
    fn rejects_bad_argument() {
        assert!(bessel_k(0.5, 0.0).is_err());
        assert!(bessel_k(0.5, -1.0).is_err());
        assert!(bessel_k(f64::NAN, 1.0).is_err());
    }
}
