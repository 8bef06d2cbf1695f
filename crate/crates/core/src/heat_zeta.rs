//! Heat-kernel traces of the Hodge Laplacian on p-forms over Gamma\H^n and
//! the zeta-function quantities built from them.
//!
//! Identity orbital integral:
//! `I^(p)(t) = chi(1) Vol / (4 pi) int_R mu_p(r) exp(-t (r^2 + p + rho_0^2)) dr`
//!
//! Hyperbolic orbital integral:
//! `H^(p)(t) = (4 pi t)^{-1/2} sum_gamma chi(gamma)/j(gamma) t_gamma C(gamma)
//!             chi_p(m_gamma) exp(-t (rho_0^2 + p) - t_gamma^2 / (4t))`
//!
//! Both vanish for p = -1.

use num_traits::{One, Zero};
use statrs::function::gamma::gamma;

use crate::anomaly::{half_dimension, rho0_squared, sector_terms};
use crate::bessel::bessel_k;
use crate::error::{Error, Result};
use crate::exact_arith::{
    bernoulli, binomial, factorial, integer, inv_pow2, ln_abs, pow, rational, signum, to_f64,
    Rational,
};
use crate::manifold::ManifoldData;
use crate::plancherel::{density_prefactor, miatello_coefficients, plancherel_polynomial, tanh_pi};
use crate::quadrature::{exp_sinh, pairwise_sum, QuadOptions, QuadResult};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeatTraceBreakdown {
    pub t: f64,
    pub identity_part: f64,
    pub hyperbolic_part: f64,
    /// Signed Betti sum subtracted from the co-exact trace; zero for the
    /// plain trace.
    pub betti_part: f64,
    pub total: f64,
    /// Size of the Gaussian factor at the longest included geodesic.
    pub hyperbolic_remainder_bound: f64,
    pub empty_spectrum: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperbolicTerm {
    pub value: f64,
    /// (4 pi t)^{-1/2} exp(-t beta - t_max^2 / (4t)); the next geodesic
    /// beyond the supplied list contributes at most this per unit weight.
    pub remainder_bound: f64,
    pub empty_spectrum: bool,
}

fn check_sector(m: &ManifoldData, p: i64) -> Result<()> {
    let n = m.dimension() as i64;
    if p < -1 || p > n - 1 {
        return Err(Error::OutOfRange {
            what: "p",
            value: p,
            min: -1,
            max: n - 1,
        });
    }
    Ok(())
}

fn check_time(t: f64) -> Result<()> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::InvalidArgument(format!("t must be positive, got {t}")));
    }
    Ok(())
}

fn beta(m: &ManifoldData, p: i64) -> f64 {
    p as f64 + m.rho0_squared()
}

fn quad_opts() -> QuadOptions {
    QuadOptions::default().with_abs_tol(1e-12).with_rel_tol(1e-13)
}

/// I^(p)(t) by double-exponential quadrature over [0, inf), doubled.
pub fn identity_heat_term(m: &ManifoldData, p: i64, t: f64) -> Result<f64> {
    Ok(identity_heat_quadrature(m, p, t)?.value)
}

/// As [`identity_heat_term`], with the quadrature diagnostics.
pub fn identity_heat_quadrature(m: &ManifoldData, p: i64, t: f64) -> Result<QuadResult> {
    check_sector(m, p)?;
    check_time(t)?;
    if p == -1 {
        return Ok(QuadResult {
            value: 0.0,
            error: 0.0,
            levels: 0,
            evaluations: 0,
        });
    }
    let k = m.half_dimension();
    let poly = plancherel_polynomial(k, p as u32)?;
    let coeffs: Vec<f64> = poly.coefficients().iter().map(to_f64).collect();
    let b = beta(m, p);
    // chi(1) Vol / (4 pi) * pi * C / (2^{4k-4} Gamma(k)^2), doubled for the half line
    let pref = 2.0 * m.chi_one() * m.volume() / 4.0 * to_f64(&density_prefactor(k, p as u32));
    let integrand = |r: f64| {
        let damping = (-t * (r * r + b)).exp();
        if damping == 0.0 {
            return 0.0;
        }
        let r2 = r * r;
        let poly = coeffs.iter().rev().fold(0.0, |acc, c| acc * r2 + c);
        r * poly * tanh_pi(r) * damping
    };
    let mut q = exp_sinh(integrand, &quad_opts().with_abs_tol(1e-12 / pref.abs().max(1e-300)))?;
    q.value *= pref;
    q.error *= pref.abs();
    Ok(q)
}

/// Truncated asymptotic expansion of `int_R r^{2l+1} e^{-t r^2} tanh(pi r) dr`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TanhMomentSeries {
    pub value: f64,
    /// |first omitted term|; bounds the truncation error.
    pub first_omitted: f64,
    /// Highest k included; -1 means only the leading l! t^{-l-1} term.
    pub order_used: i64,
    /// Index of the smallest-magnitude term, if the scan reached it.
    pub optimal_index: Option<usize>,
    /// True when the requested order was cut back to the optimal one.
    pub truncated_at_optimal: bool,
}

/// Upper limit when searching for the smallest term.
const MAX_SERIES_TERMS: usize = 4000;

/// Returns (sign, ln|T_k|) for the k-th correction term
/// T_k = (-1)^l (1 - 2^{-2l-2k-1}) t^k B_{2(l+k+1)} / (k! (l+k+1)).
/// Magnitudes are carried in log space since B_{2m} leaves the f64 range
/// long before the optimal truncation index for small t.
fn series_term(l: u32, k: usize, ln_t: f64) -> (i32, f64) {
    let m = l as usize + k + 1;
    let b = bernoulli(2 * m);
    let sign = signum(&b) * if l % 2 == 0 { 1 } else { -1 };
    let ln_factorial: f64 = (2..=k).map(|i| (i as f64).ln()).sum();
    let ln_mag = (-(0.5f64).powi(2 * m as i32 - 1)).ln_1p() + ln_abs(&b)
        - ln_factorial
        - (m as f64).ln()
        + k as f64 * ln_t;
    (sign, ln_mag)
}

/// `l! t^{-l-1} - sum_{k=0}^{K} T_k`, where K = min(order, k* - 1) and k*
/// is the index of the smallest |T_k|. The series diverges for every t > 0,
/// so it is never summed past its smallest term.
pub fn tanh_moment_series(l: u32, t: f64, order: usize) -> Result<TanhMomentSeries> {
    check_time(t)?;
    let ln_t = t.ln();
    let mut terms: Vec<(i32, f64)> = vec![series_term(l, 0, ln_t)];
    let mut optimal = None;
    // Scan until the terms start growing or until T_{order+1} is known.
    while terms.len() < MAX_SERIES_TERMS && terms.len() <= order.saturating_add(1) {
        let k = terms.len();
        let next = series_term(l, k, ln_t);
        let grows = next.1 >= terms[k - 1].1;
        terms.push(next);
        if grows {
            optimal = Some(k - 1);
            break;
        }
    }
    let (kept, truncated_at_optimal) = match optimal {
        Some(best) if order >= best => (best, true),
        _ => (order.saturating_add(1).min(terms.len() - 1), false),
    };
    let corrections: Vec<f64> = terms[..kept]
        .iter()
        .map(|&(sign, ln)| sign as f64 * ln.exp())
        .collect();
    let leading = to_f64(&Rational::from_integer(factorial(l))) * t.powi(-(l as i32) - 1);
    Ok(TanhMomentSeries {
        value: leading - pairwise_sum(&corrections),
        first_omitted: terms[kept].1.exp(),
        order_used: kept as i64 - 1,
        optimal_index: optimal,
        truncated_at_optimal,
    })
}

/// The same moment by direct quadrature.
pub fn tanh_moment_quadrature(l: u32, t: f64) -> Result<QuadResult> {
    check_time(t)?;
    let e = 2 * l as i32 + 1;
    let mut q = exp_sinh(
        |r| {
            let damping = (-t * r * r).exp();
            if damping == 0.0 {
                0.0
            } else {
                r.powi(e) * damping * tanh_pi(r)
            }
        },
        &QuadOptions::default().with_abs_tol(0.0).with_rel_tol(1e-15),
    )
    .or_else(|_| {
        exp_sinh(
            |r| {
                let damping = (-t * r * r).exp();
                if damping == 0.0 {
                    0.0
                } else {
                    r.powi(e) * damping * tanh_pi(r)
                }
            },
            &QuadOptions::default().with_abs_tol(0.0).with_rel_tol(1e-13),
        )
    })?;
    q.value *= 2.0;
    q.error *= 2.0;
    Ok(q)
}

/// H^(p)(t) summed over the supplied spectrum in list order.
pub fn hyperbolic_heat_term(m: &ManifoldData, p: i64, t: f64) -> Result<HyperbolicTerm> {
    check_sector(m, p)?;
    check_time(t)?;
    let geodesics = m.geodesics();
    let b = beta(m, p);
    let norm = 1.0 / (4.0 * std::f64::consts::PI * t).sqrt();
    let t_max = geodesics.last().map_or(0.0, |g| g.length);
    let remainder_bound = norm * (-t * b - t_max * t_max / (4.0 * t)).exp();
    if p == -1 || geodesics.is_empty() {
        return Ok(HyperbolicTerm {
            value: 0.0,
            remainder_bound: if p == -1 { 0.0 } else { remainder_bound },
            empty_spectrum: geodesics.is_empty(),
        });
    }
    let n = m.dimension();
    let terms: Vec<f64> = geodesics
        .iter()
        .map(|g| {
            g.weight() * g.character(n, p) * (-t * b - g.length * g.length / (4.0 * t)).exp()
        })
        .collect();
    Ok(HyperbolicTerm {
        value: norm * pairwise_sum(&terms),
        remainder_bound,
        empty_spectrum: false,
    })
}

/// Tr exp(-t L_p) = I^(p) + I^(p-1) + H^(p) + H^(p-1).
pub fn heat_trace(m: &ManifoldData, p: i64, t: f64) -> Result<HeatTraceBreakdown> {
    check_sector(m, p)?;
    let identity = identity_heat_term(m, p, t)? + identity_heat_term(m, p - 1, t)?;
    let h0 = hyperbolic_heat_term(m, p, t)?;
    let h1 = hyperbolic_heat_term(m, p - 1, t)?;
    let hyperbolic = h0.value + h1.value;
    Ok(HeatTraceBreakdown {
        t,
        identity_part: identity,
        hyperbolic_part: hyperbolic,
        betti_part: 0.0,
        total: identity + hyperbolic,
        hyperbolic_remainder_bound: h0.remainder_bound + h1.remainder_bound,
        empty_spectrum: h0.empty_spectrum,
    })
}

/// Trace over co-exact p-forms:
/// sum_{j=0}^{p} (-1)^j (I^(p-j) + I^(p-j-1) + H^(p-j) + H^(p-j-1) - b_{p-j}).
pub fn coexact_trace(m: &ManifoldData, p: i64, t: f64) -> Result<HeatTraceBreakdown> {
    check_sector(m, p)?;
    if p < 0 {
        return Err(Error::OutOfRange {
            what: "p",
            value: p,
            min: 0,
            max: m.dimension() as i64 - 1,
        });
    }
    let betti = m.betti().ok_or(Error::MissingBetti(p as usize))?;
    let mut identity = Vec::new();
    let mut hyperbolic = Vec::new();
    let mut betti_sum = 0.0;
    let mut remainder = 0.0;
    let mut empty = false;
    for j in 0..=p {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        let q = p - j;
        let trace = heat_trace(m, q, t)?;
        identity.push(sign * trace.identity_part);
        hyperbolic.push(sign * trace.hyperbolic_part);
        betti_sum += sign * betti[q as usize] as f64;
        remainder += trace.hyperbolic_remainder_bound;
        empty = trace.empty_spectrum;
    }
    let identity_part = pairwise_sum(&identity);
    let hyperbolic_part = pairwise_sum(&hyperbolic);
    Ok(HeatTraceBreakdown {
        t,
        identity_part,
        hyperbolic_part,
        betti_part: betti_sum,
        total: identity_part + hyperbolic_part - betti_sum,
        hyperbolic_remainder_bound: remainder,
        empty_spectrum: empty,
    })
}

/// int_0^inf t^{s-1} H^(p)(t) dt in closed form through McDonald functions:
///
/// `sum_gamma chi/(sqrt(pi) j) t_gamma C chi_p (2 sqrt(beta)/t_gamma)^{1/2-s}
///  K_{1/2-s}(t_gamma sqrt(beta))`, beta = p + rho_0^2.
///
/// The same beta enters the prefactor and the Bessel argument; for a
/// j-shifted sector p - j this is alpha - j in both places.
pub fn mellin_hyperbolic(m: &ManifoldData, p: i64, s: f64) -> Result<f64> {
    check_sector(m, p)?;
    if !s.is_finite() {
        return Err(Error::InvalidArgument(format!("s must be finite, got {s}")));
    }
    if p == -1 {
        return Ok(0.0);
    }
    let n = m.dimension();
    let sqrt_beta = beta(m, p).sqrt();
    let nu = 0.5 - s;
    let terms = m
        .geodesics()
        .iter()
        .map(|g| {
            let k = bessel_k(nu, g.length * sqrt_beta)?;
            Ok(g.weight() * g.character(n, p) * (2.0 * sqrt_beta / g.length).powf(nu) * k)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(pairwise_sum(&terms) / std::f64::consts::PI.sqrt())
}

/// int_0^inf t^{s-1} H^(p)(t) dt by direct quadrature in t.
pub fn mellin_hyperbolic_quadrature(m: &ManifoldData, p: i64, s: f64) -> Result<QuadResult> {
    check_sector(m, p)?;
    if p == -1 || m.geodesics().is_empty() {
        return Ok(QuadResult {
            value: 0.0,
            error: 0.0,
            levels: 0,
            evaluations: 0,
        });
    }
    let n = m.dimension();
    let b = beta(m, p);
    let weights: Vec<(f64, f64)> = m
        .geodesics()
        .iter()
        .map(|g| (g.weight() * g.character(n, p), g.length * g.length / 4.0))
        .collect();
    let norm = 1.0 / (4.0 * std::f64::consts::PI).sqrt();
    let integrand = |t: f64| {
        let ln_t = t.ln();
        let terms: Vec<f64> = weights
            .iter()
            .map(|&(w, a)| w * ((s - 1.5) * ln_t - t * b - a / t).exp())
            .collect();
        norm * pairwise_sum(&terms)
    };
    exp_sinh(integrand, &QuadOptions::default().with_abs_tol(0.0).with_rel_tol(1e-13))
}

/// zeta_H(s) = Gamma(s)^{-1} * [`mellin_hyperbolic`]; vanishes linearly at s = 0.
pub fn zeta_hyperbolic(m: &ManifoldData, p: i64, s: f64) -> Result<f64> {
    Ok(mellin_hyperbolic(m, p, s)? / gamma(s))
}

/// The j-th bracket of the anomaly formula (sign (-1)^j included, global
/// prefactor excluded). Summing over j = 0..=p gives the anomaly times
/// (4 pi)^{n/2} Gamma(n/2) R^n / pi^{-n/2}.
pub fn zeta_identity_at_zero(n: u32, p: u32, j: u32, alpha: &Rational) -> Result<Rational> {
    Ok(sector_terms(n, p, j, alpha)?
        .into_iter()
        .fold(Rational::zero(), |acc, t| acc + t.value))
}

/// Exact zeta(0) of the single identity term I^(q), per unit chi(1) Vol:
///
/// `C(n-1,q) / (2^{2(n-1)} Gamma(n/2)^2) sum_l a_{2l}^(q) (-1)^{l+1}/(l+1)
///  ((1 - 2^{-2l-1}) B_{2l+2} + beta^{l+1})`, beta = q + rho_0^2.
pub fn identity_sector_zeta_zero(n: u32, q: i64) -> Result<Rational> {
    let k = half_dimension(n)?;
    let a = miatello_coefficients(k, q)?;
    if q < 0 {
        return Ok(Rational::zero());
    }
    let beta = integer(q) + rho0_squared(n);
    let mut sum = Rational::zero();
    for (l, coeff) in a.iter().enumerate() {
        let l = l as u32;
        let b = (Rational::one() - inv_pow2(2 * l + 1)) * bernoulli(2 * l as usize + 2);
        let sign = if l % 2 == 0 { -1 } else { 1 };
        sum += rational(sign, l as i64 + 1) * coeff * (b + pow(&beta, l as i32 + 1));
    }
    Ok(density_prefactor(k, q as u32) / integer(4) * sum)
}

/// Exact identity-sector zeta(0) of the co-exact trace per unit chi(1) Vol,
/// assembled term by term from the trace formula:
/// sum_j (-1)^j (z(p-j) + z(p-j-1)) with z = [`identity_sector_zeta_zero`].
pub fn coexact_identity_zeta_zero(n: u32, p: u32) -> Result<Rational> {
    let mut total = Rational::zero();
    for j in 0..=p as i64 {
        let q = p as i64 - j;
        let pair = identity_sector_zeta_zero(n, q)? + identity_sector_zeta_zero(n, q - 1)?;
        if j % 2 == 0 {
            total += pair;
        } else {
            total -= pair;
        }
    }
    Ok(total)
}

/// Gamma(s)^{-1} int_0^inf t^{s-1} I^(q)(t) dt continued to all real s.
///
/// Integrating in t first turns the kernel into (r^2 + beta)^{-s}. Splitting
/// tanh(pi r) = 1 - 2/(1 + e^{2 pi r}) leaves a closed-form Gamma-function
/// piece and an exponentially convergent r-integral, evaluated by
/// quadrature, so the result is analytic in s and can be sampled near 0.
pub fn identity_zeta_continued(m: &ManifoldData, q: i64, s: f64) -> Result<f64> {
    check_sector(m, q)?;
    if q == -1 {
        return Ok(0.0);
    }
    let k = m.half_dimension();
    let a: Vec<f64> = miatello_coefficients(k, q)?.iter().map(to_f64).collect();
    let b = beta(m, q);
    let pref = m.chi_one() * m.volume() / 4.0 * to_f64(&density_prefactor(k, q as u32));
    let opts = QuadOptions::default().with_abs_tol(1e-15).with_rel_tol(1e-14);
    let mut sum = Vec::with_capacity(a.len());
    for (l, coeff) in a.iter().enumerate() {
        let lf = l as f64;
        let gamma_ratio: f64 = (1..=l + 1).map(|i| 1.0 / (s - i as f64)).product();
        let smooth = to_f64(&Rational::from_integer(factorial(l as u32))) * b.powf(lf + 1.0 - s) * gamma_ratio;
        let e = 2 * l as i32 + 1;
        let fermi = exp_sinh(
            |r| r.powi(e) * (r * r + b).powf(-s) / (1.0 + (2.0 * std::f64::consts::PI * r).exp()),
            &opts,
        )?;
        sum.push(coeff * (smooth - 4.0 * fermi.value));
    }
    Ok(pref * pairwise_sum(&sum))
}

/// zeta_I(0) estimated from [`identity_zeta_continued`] at s = h, 2h, 3h by
/// quadratic extrapolation to s = 0.
pub fn identity_zeta_zero_extrapolated(m: &ManifoldData, q: i64, h: f64) -> Result<f64> {
    let f1 = identity_zeta_continued(m, q, h)?;
    let f2 = identity_zeta_continued(m, q, 2.0 * h)?;
    let f3 = identity_zeta_continued(m, q, 3.0 * h)?;
    Ok(3.0 * f1 - 3.0 * f2 + f3)
}

/// Binomial weight C(n-1, q) as a float.
pub fn sector_multiplicity(n: u32, q: i64) -> f64 {
    to_f64(&binomial(n - 1, q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold::{synth_spectrum, GeodesicClass, Holonomy};

    fn surface(volume: f64) -> ManifoldData {
        ManifoldData::new(2, volume, vec![]).unwrap()
    }

    /// Composite Simpson on [0, upper] with n panels.
    fn simpson(f: impl Fn(f64) -> f64, upper: f64, n: usize) -> f64 {
        let h = upper / n as f64;
        let mut s = f(0.0) + f(upper);
        for i in 1..n {
            s += f(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        s * h / 3.0
    }

    #[test]
    fn identity_term_surface_example() {
        let m = surface(4.0 * std::f64::consts::PI);
        let v = identity_heat_term(&m, 0, 1.0).unwrap();
        let pi = std::f64::consts::PI;
        let f = |r: f64| pi * r * (pi * r).tanh() * (-(r * r + 0.25)).exp();
        let coarse = 2.0 * simpson(f, 12.0, 12_000);
        let fine = 2.0 * simpson(f, 12.0, 24_000);
        assert!((coarse - fine).abs() < 1e-10);
        assert!((v - fine).abs() < 1e-10, "{v} vs {fine}");
    }

    #[test]
    fn identity_term_conventions() {
        let m = surface(3.0);
        assert_eq!(identity_heat_term(&m, -1, 0.7).unwrap(), 0.0);
        assert!(identity_heat_term(&m, 2, 0.7).is_err());
        assert!(identity_heat_term(&m, 0, 0.0).is_err());
        let mut prev = f64::INFINITY;
        for i in 0..20 {
            let v = identity_heat_term(&m, 0, 1.0 + i as f64 * 0.5).unwrap();
            assert!(v > 0.0 && v < prev);
            prev = v;
        }
    }

    #[test]
    fn identity_term_positive() {
        for k in 1..=4u32 {
            let m = ManifoldData::new(2 * k, 1.0, vec![]).unwrap();
            for p in 0..2 * k as i64 {
                for t in [0.05, 0.3, 1.0, 4.0] {
                    assert!(identity_heat_term(&m, p, t).unwrap() > 0.0, "k={k} p={p} t={t}");
                }
            }
        }
    }

    #[test]
    fn series_leading_correction() {
        let s = tanh_moment_series(0, 0.1, 0).unwrap();
        assert_eq!(s.order_used, 0);
        assert!(!s.truncated_at_optimal);
        assert!((s.value - (10.0 - 1.0 / 12.0)).abs() < 1e-13);
    }

    #[test]
    fn series_tracks_quadrature() {
        for t in [0.1, 0.5] {
            let s = tanh_moment_series(0, t, usize::MAX).unwrap();
            let q = tanh_moment_quadrature(0, t).unwrap();
            assert!(s.truncated_at_optimal);
            assert!((s.value - q.value).abs() <= s.first_omitted + 1e-13 * q.value.abs());
        }
        // strict bound where the omitted term is resolvable in f64
        for order in 0..4 {
            let s = tanh_moment_series(1, 0.4, order).unwrap();
            let q = tanh_moment_quadrature(1, 0.4).unwrap();
            assert!((s.value - q.value).abs() <= s.first_omitted, "order {order}");
        }
    }

    #[test]
    fn series_leading_asymptotics() {
        let mut prev = f64::INFINITY;
        for t in [0.1, 0.03, 0.01, 0.003] {
            let s = tanh_moment_series(2, t, 3).unwrap();
            let ratio = s.value / (2.0 * t.powi(-3));
            let dev = (ratio - 1.0).abs();
            assert!(dev < prev);
            prev = dev;
        }
        assert!(prev < 1e-7);
    }

    fn single_geodesic() -> ManifoldData {
        let g = GeodesicClass {
            length: 1.0,
            power: 1,
            c_gamma: 0.5,
            chi: 1.0,
            holonomy: Holonomy::Trivial,
        };
        ManifoldData::new(2, 1.0, vec![g]).unwrap()
    }

    #[test]
    fn hyperbolic_single_geodesic() {
        let m = single_geodesic();
        let h = hyperbolic_heat_term(&m, 0, 1.0).unwrap();
        let expected = 0.5 * (-0.5f64).exp() / (4.0 * std::f64::consts::PI).sqrt();
        assert!((h.value - expected).abs() < 1e-16);
        assert!((h.value - 0.08555).abs() < 1e-5);
        assert_eq!(hyperbolic_heat_term(&m, -1, 1.0).unwrap().value, 0.0);
        let empty = hyperbolic_heat_term(&surface(1.0), 0, 1.0).unwrap();
        assert!(empty.empty_spectrum);
        assert_eq!(empty.value, 0.0);
    }

    #[test]
    fn hyperbolic_is_linear_in_chi() {
        let base = ManifoldData::new(4, 1.0, synth_spectrum(5, 3, 1.0, 2, 4).unwrap()).unwrap();
        let scaled_geo: Vec<GeodesicClass> = base
            .geodesics()
            .iter()
            .map(|g| GeodesicClass { chi: 2.5 * g.chi, ..g.clone() })
            .collect();
        let scaled = ManifoldData::new(4, 1.0, scaled_geo).unwrap();
        for p in 0..4 {
            let a = hyperbolic_heat_term(&base, p, 0.8).unwrap().value;
            let b = hyperbolic_heat_term(&scaled, p, 0.8).unwrap().value;
            assert!((b - 2.5 * a).abs() <= 1e-15 * b.abs());
        }
    }

    #[test]
    fn coexact_assembly() {
        let geo = synth_spectrum(9, 2, 1.0, 2, 4).unwrap();
        let m = ManifoldData::new(4, 2.0, geo)
            .unwrap()
            .with_betti(vec![1, 3, 5, 3, 1])
            .unwrap();
        let t = 0.6;
        let i = |q| identity_heat_term(&m, q, t).unwrap();
        let h = |q| hyperbolic_heat_term(&m, q, t).unwrap().value;
        let c0 = coexact_trace(&m, 0, t).unwrap();
        assert!((c0.total - (i(0) + h(0) - 1.0)).abs() < 1e-12);
        let c1 = coexact_trace(&m, 1, t).unwrap();
        assert!((c1.total - (i(1) + h(1) - 3.0 + 1.0)).abs() < 1e-12);
        assert_eq!(c1.betti_part, 2.0);

        let bare = ManifoldData::new(4, 2.0, vec![]).unwrap().with_betti(vec![0; 5]).unwrap();
        let c = coexact_trace(&bare, 2, t).unwrap();
        assert_eq!(c.hyperbolic_part, 0.0);
        assert_eq!(c.total, c.identity_part);
        assert!(matches!(
            coexact_trace(&ManifoldData::new(4, 2.0, vec![]).unwrap(), 1, t),
            Err(Error::MissingBetti(_))
        ));
    }

    #[test]
    fn mellin_half_integer_order() {
        let m = single_geodesic();
        let v = mellin_hyperbolic(&m, 0, 0.0).unwrap();
        // sum w e^{-t sqrt(beta)} / t_gamma with K_{1/2} closed form
        let expected = 1.0 * 0.5 * (-0.5f64).exp();
        assert!((v - expected).abs() < 1e-15);
    }

    #[test]
    fn mellin_matches_time_quadrature() {
        let m = ManifoldData::new(2, 1.0, synth_spectrum(3, 3, 1.0, 2, 2).unwrap()).unwrap();
        for s in [0.3, 0.5, 0.7] {
            let closed = mellin_hyperbolic(&m, 0, s).unwrap();
            let quad = mellin_hyperbolic_quadrature(&m, 0, s).unwrap().value;
            assert!(((closed - quad) / quad).abs() < 1e-8, "s={s}");
        }
    }

    #[test]
    fn zeta_identity_examples() {
        assert_eq!(zeta_identity_at_zero(2, 0, 0, &rational(1, 4)).unwrap(), rational(-1, 3));
        assert_eq!(zeta_identity_at_zero(4, 0, 0, &rational(9, 4)).unwrap(), rational(29, 15));
        let alpha = rational(13, 4);
        let total = zeta_identity_at_zero(4, 1, 0, &alpha).unwrap()
            + zeta_identity_at_zero(4, 1, 1, &alpha).unwrap();
        assert_eq!(total, rational(-67, 10));
    }

    #[test]
    fn sector_zeta_relates_to_anomaly_for_low_forms() {
        // trace-formula assembly equals the anomaly bracket for p <= 1
        for n in (2..=12).step_by(2) {
            for p in 0..(n / 2).min(2) {
                let alpha = integer(p as i64) + rho0_squared(n);
                let bracket: Rational = (0..=p)
                    .map(|j| zeta_identity_at_zero(n, p, j, &alpha).unwrap())
                    .fold(Rational::zero(), |a, b| a + b);
                let k = n / 2;
                let scale = pow(&integer(2), 2 * (n as i32 - 1))
                    * Rational::from_integer(factorial(k - 1)).pow(2);
                assert_eq!(coexact_identity_zeta_zero(n, p).unwrap() * scale, bracket, "n={n} p={p}");
            }
        }
    }

    #[test]
    fn continued_identity_zeta_matches_exact() {
        for n in [2u32, 4, 6] {
            let m = ManifoldData::new(n, 3.0, vec![]).unwrap();
            for q in 0..n as i64 {
                let numeric = identity_zeta_zero_extrapolated(&m, q, 1e-3).unwrap();
                let exact = 3.0 * to_f64(&identity_sector_zeta_zero(n, q).unwrap());
                assert!(((numeric - exact) / exact).abs() < 1e-6, "n={n} q={q}: {numeric} vs {exact}");
                let direct = identity_zeta_continued(&m, q, 0.0).unwrap();
                assert!(((direct - exact) / exact).abs() < 1e-10);
            }
        }
    }
}
