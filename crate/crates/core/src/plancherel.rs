//! Harish-Chandra-Plancherel data for SO_1(n,1), n = 2k: the even polynomial
//! P_{sigma_p}(r), its Miatello coefficients and the density mu_{sigma_p}(r).

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact_arith::{binomial, factorial, rational, to_f64, Rational};

/// Even polynomial in `r`, stored as coefficients of `r^(2l)` for
/// `l = 0..k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvenPolynomial {
    coefficients: Vec<Rational>,
    rank: u32,
}

impl EvenPolynomial {
    pub fn coefficients(&self) -> &[Rational] {
        &self.coefficients
    }

    /// The half-dimension k.
    pub fn rank(&self) -> u32 {
        self.rank
    }

    /// Exact value at `r^2 = r_squared`.
    pub fn eval_exact(&self, r_squared: &Rational) -> Rational {
        self.coefficients
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * r_squared + c)
    }

    pub fn eval(&self, r: f64) -> f64 {
        let r2 = r * r;
        self.coefficients
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * r2 + to_f64(c))
    }
}

/// The shifts `c` in the factors `r^2 + c^2` of P_{sigma_p}, for `p < k`.
pub(crate) fn factor_shifts(k: u32, p: u32) -> Vec<Rational> {
    let k = k as i64;
    let p = p as i64;
    let mut shifts = Vec::with_capacity(k as usize - 1);
    for l in 2..=p + 1 {
        shifts.push(rational(2 * (k - l) + 3, 2));
    }
    for l in p + 2..=k {
        shifts.push(rational(2 * (k - l) + 1, 2));
    }
    shifts
}

fn check_rank(k: u32) -> Result<()> {
    if k == 0 {
        return Err(Error::OutOfRange {
            what: "k",
            value: 0,
            min: 1,
            max: i64::MAX,
        });
    }
    Ok(())
}

fn check_form(k: u32, p: i64, min: i64) -> Result<()> {
    check_rank(k)?;
    let max = 2 * k as i64 - 1;
    if p < min || p > max {
        return Err(Error::OutOfRange {
            what: "p",
            value: p,
            min,
            max,
        });
    }
    Ok(())
}

/// P_{sigma_p}(r) for G = SO_1(2k, 1), expanded exactly. Degrees `p >= k`
/// are folded onto `2k - 1 - p`.
pub fn plancherel_polynomial(k: u32, p: u32) -> Result<EvenPolynomial> {
    check_form(k, p as i64, 0)?;
    let p = if p >= k { 2 * k - 1 - p } else { p };
    let mut coefficients = vec![Rational::one()];
    for shift in factor_shifts(k, p) {
        let c2 = &shift * &shift;
        let mut next = vec![Rational::zero(); coefficients.len() + 1];
        for (i, c) in coefficients.iter().enumerate() {
            next[i] += c * &c2;
            next[i + 1] += c;
        }
        coefficients = next;
    }
    Ok(EvenPolynomial {
        coefficients,
        rank: k,
    })
}

/// `[a_0, a_2, ..., a_{2(k-1)}]` for degree `p`; `p = -1` gives all zeros,
/// so that sums over `p - j - 1` need no special case.
pub fn miatello_coefficients(k: u32, p: i64) -> Result<Vec<Rational>> {
    check_form(k, p, -1)?;
    if p == -1 {
        return Ok(vec![Rational::zero(); k as usize]);
    }
    Ok(plancherel_polynomial(k, p as u32)?.coefficients)
}

/// The constant `pi / (2^(4k-4) Gamma(k)^2) * C(2k-1, p)` without the pi.
pub(crate) fn density_prefactor(k: u32, p: u32) -> Rational {
    let gamma_k = Rational::from_integer(factorial(k - 1));
    binomial(2 * k - 1, p as i64) / (crate::exact_arith::pow(&rational(2, 1), 4 * k as i32 - 4) * &gamma_k * &gamma_k)
}

/// tanh(pi r), via 1 - 2/(1 + e^{2 pi |r|}) away from the origin.
pub fn tanh_pi(r: f64) -> f64 {
    let x = std::f64::consts::PI * r;
    if x.abs() < 1.0 {
        x.tanh()
    } else {
        let t = 1.0 - 2.0 / (1.0 + (2.0 * x.abs()).exp());
        t.copysign(x)
    }
}

/// mu_{sigma_p}(r) = pi / (2^(4k-4) Gamma(k)^2) C(2k-1,p) r P_{sigma_p}(r) tanh(pi r).
///
/// The factor r tanh(pi r) is even, so the density is an even function of r.
pub fn plancherel_density(k: u32, p: u32, r: f64) -> Result<f64> {
    if !r.is_finite() {
        return Err(Error::InvalidArgument(format!("r must be finite, got {r}")));
    }
    let poly = plancherel_polynomial(k, p)?;
    let pref = std::f64::consts::PI * to_f64(&density_prefactor(k, p));
    Ok(pref * r * poly.eval(r) * tanh_pi(r))
}
