//! Acceptance criteria. Each test writes one `PASS`/`FAIL` line straight to
//! stderr (so it shows without --nocapture) and then asserts.
//!
//! Criterion 8 is a scope note rather than a check: real arithmetic quotients
//! and their length spectra are out of reach here, so criteria 4-6 run on
//! seeded synthetic spectra (`synth_spectrum`), which exercise every formula
//! on the hyperbolic side.

use std::io::Write;
use std::time::{Duration, Instant};

use hyperzeta::anomaly::{conformal_anomaly, conformal_scalar_anomaly, AlphaPolicy, AnomalySpec};
use hyperzeta::exact_arith::{bernoulli, rational, PiValue, Rational};
use hyperzeta::heat_zeta::{
    identity_sector_zeta_zero, mellin_hyperbolic, mellin_hyperbolic_quadrature,
    tanh_moment_quadrature, tanh_moment_series, zeta_hyperbolic,
};
use hyperzeta::manifold::{synth_spectrum, ManifoldData};
use hyperzeta::plancherel::{miatello_coefficients, plancherel_polynomial};
use hyperzeta::verify::matches_printed;
use num_traits::{One, Zero};

const GOLDEN_RUNTIME: Duration = Duration::from_secs(1);
const SERIES_RUNTIME: Duration = Duration::from_secs(10);
const MELLIN_RUNTIME: Duration = Duration::from_secs(30);
const PROPERTY_RUNTIME: Duration = Duration::from_secs(5);
const DISPLAY_DIGITS: usize = 6;
const MELLIN_REL_TOL: f64 = 1e-8;
const RATIO_TARGET: f64 = 10.0;
const RATIO_REL_TOL: f64 = 0.02;
const MAGNITUDE_FACTOR: f64 = 1e-2;
/// Slack for the series oracle beyond the first omitted term: the quadrature
/// error estimate plus 8 ulp of rounding in the f64 sums, since at optimal
/// truncation the omitted term falls far below f64 resolution.
const SERIES_ULP_SLACK: f64 = 8.0;
const SYNTH_SEED: u64 = 7;
const SYNTH_PRIMITIVES: usize = 5;

fn report(id: u32, title: &str, start: Instant, limit: Duration, failures: &[String]) {
    let elapsed = start.elapsed();
    let mut failures = failures.to_vec();
    if elapsed > limit {
        failures.push(format!("runtime {elapsed:?} over {limit:?}"));
    }
    let status = if failures.is_empty() { "PASS" } else { "FAIL" };
    let _ = writeln!(
        std::io::stderr(),
        "[criterion {id}] {status} {title} ({:.3} s)",
        elapsed.as_secs_f64()
    );
    assert!(failures.is_empty(), "criterion {id}: {}", failures.join("; "));
}

fn pv(num: i64, den: i64, e: u32) -> PiValue {
    PiValue::new(rational(num, den), e)
}

/// (n, p, exact, printed numeric)
const TABLE2: [(u32, u32, i64, i64, &str); 15] = [
    (2, 0, -1, 12, "-0.0265258"),
    (4, 0, 29, 240, "0.012243"),
    (4, 1, -67, 160, "-0.0424282"),
    (6, 0, -1139, 4032, "-0.00911074"),
    (6, 1, 2539, 2016, "0.0406184"),
    (6, 2, -2005, 1792, "-0.036085"),
    (8, 0, 32377, 34560, "0.00961753"),
    (8, 1, -1368853, 276480, "-0.0508269"),
    (8, 2, 101665, 41472, "0.0251662"),
    (8, 3, 118459, 34560, "0.035188"),
    (10, 0, -2046263, 506880, "-0.0131919"),
    (10, 1, 16454263, 675840, "0.0795582"),
    (10, 2, -2475365, 811008, "-0.00997389"),
    (10, 3, -34196177, 7096320, "-0.0157469"),
    (10, 4, -14020681, 135168, "-0.338958"),
];

const TABLE1: [(u32, i64, i64, &str); 7] = [
    (2, -1, 12, "-0.0265258"),
    (4, -1, 240, "-4.22172e-4"),
    (6, -5, 4032, "-3.99945e-5"),
    (8, -23, 34560, "-6.83210e-6"),
    (10, -263, 506880, "-1.69551e-6"),
    (12, -133787, 251596800, "-5.53107e-7"),
    (14, -157009, 232243200, "-2.23837e-7"),
];

#[test]
fn criterion_1_table2_golden() {
    let start = Instant::now();
    let mut failures = Vec::new();
    for (n, p, num, den, printed) in TABLE2 {
        let spec = AnomalySpec::new(n, p, AlphaPolicy::Default).unwrap();
        let got = conformal_anomaly(&spec).unwrap().value;
        let expected = pv(num, den, n / 2);
        if got != expected {
            failures.push(format!("n={n} p={p}: {got} != {expected}"));
        }
        let rendered = got.to_decimal(DISPLAY_DIGITS);
        if rendered != printed {
            failures.push(format!("n={n} p={p}: rendered {rendered}, table {printed}"));
        }
    }
    report(1, "table 2: 15 p-form anomalies exact, 6 significant digits", start, GOLDEN_RUNTIME, &failures);
}

#[test]
fn criterion_2_table1_golden() {
    let start = Instant::now();
    let mut failures = Vec::new();
    for (n, num, den, printed) in TABLE1 {
        let got = conformal_scalar_anomaly(n).unwrap().value;
        let expected = pv(num, den, n / 2);
        if got != expected {
            failures.push(format!("n={n}: {got} != {expected}"));
        }
        // The printed column truncates in two rows (n = 8, 12), so agreement
        // is to one unit in the sixth significant digit.
        if !matches_printed(&got, printed).unwrap() {
            failures.push(format!("n={n}: {} vs table {printed}", got.to_decimal(DISPLAY_DIGITS)));
        }
    }
    report(2, "table 1: 7 conformal-scalar anomalies exact, 6 significant digits", start, GOLDEN_RUNTIME, &failures);
}

#[test]
fn criterion_3_scalar_specialization() {
    let start = Instant::now();
    let mut failures = Vec::new();
    for n in (2..=14).step_by(2) {
        let spec = AnomalySpec::new(n, 0, AlphaPolicy::Custom(rational(1, 4))).unwrap();
        let general = conformal_anomaly(&spec).unwrap().value;
        let special = conformal_scalar_anomaly(n).unwrap().value;
        if general != special {
            failures.push(format!("n={n}: {general} != {special}"));
        }
    }
    report(3, "conformal scalar = general formula at alpha = 1/4, n = 2..14", start, Duration::MAX, &failures);
}

#[test]
fn criterion_4_tanh_series_oracle() {
    let start = Instant::now();
    let mut failures = Vec::new();
    for l in 0..=3u32 {
        for t in [0.05, 0.1, 0.2] {
            let series = tanh_moment_series(l, t, usize::MAX).unwrap();
            let quad = tanh_moment_quadrature(l, t).unwrap();
            if !series.truncated_at_optimal {
                failures.push(format!("l={l} t={t}: not truncated at the smallest term"));
            }
            let diff = (series.value - quad.value).abs();
            let bound = series.first_omitted
                + quad.error
                + SERIES_ULP_SLACK * f64::EPSILON * quad.value.abs();
            if diff > bound {
                failures.push(format!("l={l} t={t}: |diff| {diff:e} > {bound:e}"));
            }
        }
    }
    // at low fixed orders the omitted term is resolvable and bounds the error alone
    for l in 0..=3u32 {
        for order in 0..3 {
            let series = tanh_moment_series(l, 0.4, order).unwrap();
            let quad = tanh_moment_quadrature(l, 0.4).unwrap();
            if (series.value - quad.value).abs() > series.first_omitted {
                failures.push(format!("l={l} order={order}: error exceeds first omitted term"));
            }
        }
    }
    report(4, "tanh-moment series at optimal truncation vs quadrature", start, SERIES_RUNTIME, &failures);
}

fn synthetic(n: u32) -> ManifoldData {
    let spectrum = synth_spectrum(SYNTH_SEED, SYNTH_PRIMITIVES, 1.0, 3, n).unwrap();
    ManifoldData::new(n, 8.0 * std::f64::consts::PI, spectrum).unwrap()
}

#[test]
fn criterion_5_mellin_bessel_oracle() {
    let start = Instant::now();
    let mut failures = Vec::new();
    for n in [2u32, 4, 6] {
        let m = synthetic(n);
        for p in 0..(n / 2) as i64 {
            for s in [0.3, 0.5, 0.7] {
                let closed = mellin_hyperbolic(&m, p, s).unwrap();
                let quad = mellin_hyperbolic_quadrature(&m, p, s).unwrap().value;
                let rel = ((closed - quad) / quad).abs();
                if !(rel <= MELLIN_REL_TOL) {
                    failures.push(format!("n={n} p={p} s={s}: rel {rel:e}"));
                }
            }
        }
    }
    report(5, "Bessel form of the hyperbolic Mellin transform vs t-quadrature", start, MELLIN_RUNTIME, &failures);
}

#[test]
fn criterion_6_hyperbolic_vanishes_at_zero() {
    let start = Instant::now();
    let mut failures = Vec::new();
    for n in [2u32, 4, 6] {
        let m = synthetic(n);
        for p in 0..(n / 2) as i64 {
            let z2 = zeta_hyperbolic(&m, p, 1e-2).unwrap();
            let z3 = zeta_hyperbolic(&m, p, 1e-3).unwrap();
            let ratio = z2 / z3;
            if !((ratio / RATIO_TARGET - 1.0).abs() <= RATIO_REL_TOL) {
                failures.push(format!("n={n} p={p}: ratio {ratio}"));
            }
            let identity = m.chi_one()
                * m.volume()
                * hyperzeta::exact_arith::to_f64(&identity_sector_zeta_zero(n, p).unwrap());
            if !(z3.abs() < MAGNITUDE_FACTOR * identity.abs()) {
                failures.push(format!("n={n} p={p}: |zeta_H| {z3:e} vs identity {identity:e}"));
            }
        }
    }
    report(6, "hyperbolic zeta linear in s near 0 and small against identity zeta(0)", start, Duration::MAX, &failures);
}

#[test]
fn criterion_7_property_suite() {
    let start = Instant::now();
    let mut failures = Vec::new();
    for k in 1..=4u32 {
        for p in 0..2 * k {
            if plancherel_polynomial(k, p).unwrap() != plancherel_polynomial(k, 2 * k - 1 - p).unwrap() {
                failures.push(format!("plancherel k={k} p={p} not symmetric"));
            }
        }
    }
    for k in 1..=7u32 {
        for p in 0..k as i64 {
            let a = miatello_coefficients(k, p).unwrap();
            if a.last() != Some(&Rational::one()) || a.iter().any(|c| *c <= Rational::zero()) {
                failures.push(format!("miatello k={k} p={p}: {a:?}"));
            }
        }
    }
    for m in 2..=40usize {
        let b = bernoulli(m);
        let ok = match (m % 2, m % 4) {
            (1, _) => b.is_zero(),
            (_, 2) => b > Rational::zero(),
            _ => b < Rational::zero(),
        };
        if !ok {
            failures.push(format!("B_{m} = {b}"));
        }
    }
    for num in -30..=30i64 {
        for den in 1..=12i64 {
            for e in 0..=7u32 {
                let v = PiValue::new(rational(num, den), e);
                let back: PiValue = v.to_string().parse().unwrap();
                if back != v {
                    failures.push(format!("round trip {v}"));
                }
            }
        }
    }
    let big: PiValue = "-157009000001099063/232243200 * pi^-7".parse().unwrap();
    if big.to_string().parse::<PiValue>().unwrap() != big || big.coefficient().numer().bits() < 57 {
        failures.push(format!("round trip {big}"));
    }
    report(7, "Plancherel symmetry, Miatello positivity, Bernoulli pattern, PiValue round trip", start, PROPERTY_RUNTIME, &failures);
}

#[test]
fn criterion_8_scope_note() {
    let _ = writeln!(
        std::io::stderr(),
        "[criterion 8] NOTE criteria 4-6 use seeded synthetic length spectra in place of real quotients"
    );
}
