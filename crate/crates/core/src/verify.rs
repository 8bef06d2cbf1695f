//! Self-check suite behind `hyperzeta verify`.

use std::path::Path;
use std::time::Instant;

use num_traits::Zero;
use serde::Deserialize;

use crate::anomaly::{
    conformal_anomaly, conformal_scalar_anomaly, rho0_squared, AlphaPolicy, AnomalySpec,
};
use crate::error::{Error, Result};
use crate::exact_arith::{bernoulli, integer, parse_decimal, pow, PiValue, Rational};
use crate::heat_zeta::{
    coexact_identity_zeta_zero, identity_sector_zeta_zero, identity_zeta_zero_extrapolated,
    mellin_hyperbolic, mellin_hyperbolic_quadrature, tanh_moment_quadrature, tanh_moment_series,
    zeta_hyperbolic, zeta_identity_at_zero,
};
use crate::manifold::{synth_spectrum, ManifoldData};
use crate::plancherel::plancherel_polynomial;
use crate::report::DEFAULT_DIGITS;

const EMBEDDED_GOLDEN: &str = include_str!("../golden/tables.toml");

pub const MELLIN_REL_TOL: f64 = 1e-8;
pub const SCALING_RATIO_TOL: f64 = 0.02;
pub const SCALING_MAGNITUDE_FACTOR: f64 = 1e-2;
pub const BRIDGE_REL_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GoldenRow {
    pub n: u32,
    #[serde(default)]
    pub p: u32,
    pub exact: String,
    pub numeric: String,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Golden {
    pub table1: Vec<GoldenRow>,
    pub table2: Vec<GoldenRow>,
}

impl Golden {
    pub fn embedded() -> Self {
        Self::parse(EMBEDDED_GOLDEN, Path::new("<embedded>")).expect("embedded golden tables parse")
    }

    pub fn parse(text: &str, origin: &Path) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse {
            path: origin.to_path_buf(),
            message: e.to_string(),
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        Self::parse(&text, path)
    }
}

#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

/// True when `value` agrees with a printed decimal to within one unit of
/// its last printed digit.
pub fn matches_printed(value: &PiValue, printed: &str) -> Result<bool> {
    let target = parse_decimal(printed)?;
    let mantissa = printed.trim().trim_start_matches('-');
    let (mantissa, exp) = match mantissa.find(['e', 'E']) {
        Some(i) => (&mantissa[..i], mantissa[i + 1..].parse::<i32>().map_err(|_| {
            Error::InvalidArgument(format!("bad exponent in {printed:?}"))
        })?),
        None => (mantissa, 0),
    };
    let decimals = mantissa.find('.').map_or(0, |i| mantissa.len() - i - 1) as i32;
    let unit = pow(&integer(10), exp - decimals);
    let diff = value.approximate() - target;
    Ok(if diff < Rational::zero() { -diff } else { diff } <= unit)
}

fn check_row(value: &PiValue, row: &GoldenRow) -> std::result::Result<(), String> {
    let expected: PiValue = row
        .exact
        .parse()
        .map_err(|e| format!("n={} p={}: unreadable exact value: {e}", row.n, row.p))?;
    if *value != expected {
        return Err(format!("n={} p={}: got {value}, expected {expected}", row.n, row.p));
    }
    match matches_printed(value, &row.numeric) {
        Ok(true) => Ok(()),
        Ok(false) => Err(format!(
            "n={} p={}: {} does not round to {}",
            row.n,
            row.p,
            value.to_decimal(DEFAULT_DIGITS + 2),
            row.numeric
        )),
        Err(e) => Err(format!("n={} p={}: unreadable numeric value: {e}", row.n, row.p)),
    }
}

fn golden_table(rows: &[GoldenRow], scalar: bool) -> std::result::Result<String, String> {
    if rows.is_empty() {
        return Err("no rows".into());
    }
    for row in rows {
        let result = if scalar {
            conformal_scalar_anomaly(row.n)
        } else {
            AnomalySpec::new(row.n, row.p, AlphaPolicy::Default).and_then(|s| conformal_anomaly(&s))
        }
        .map_err(|e| format!("n={} p={}: {e}", row.n, row.p))?;
        check_row(&result.value, row)?;
    }
    Ok(format!("{} rows", rows.len()))
}

fn scalar_specialization() -> std::result::Result<String, String> {
    for n in (2..=14).step_by(2) {
        let spec = AnomalySpec::new(n, 0, AlphaPolicy::ConformalScalar).map_err(|e| e.to_string())?;
        let general = conformal_anomaly(&spec).map_err(|e| e.to_string())?;
        let special = conformal_scalar_anomaly(n).map_err(|e| e.to_string())?;
        if general.value != special.value {
            return Err(format!("n={n}: {} != {}", general.value, special.value));
        }
    }
    Ok("n = 2..14".into())
}

fn plancherel_properties() -> std::result::Result<String, String> {
    for k in 1..=7u32 {
        for p in 0..2 * k {
            let poly = plancherel_polynomial(k, p).map_err(|e| e.to_string())?;
            let mirror = plancherel_polynomial(k, 2 * k - 1 - p).map_err(|e| e.to_string())?;
            if poly != mirror {
                return Err(format!("k={k} p={p}: not symmetric under p -> n-1-p"));
            }
            let c = poly.coefficients();
            if c.last().map_or(true, |l| *l != integer(1)) || c.iter().any(|x| *x < Rational::zero()) {
                return Err(format!("k={k} p={p}: expected monic with non-negative coefficients"));
            }
        }
    }
    Ok("k = 1..7".into())
}

fn bernoulli_pattern() -> std::result::Result<String, String> {
    for m in 2..=60usize {
        let b = bernoulli(m);
        let ok = if m % 2 == 1 {
            b.is_zero()
        } else if m % 4 == 2 {
            b > Rational::zero()
        } else {
            b < Rational::zero()
        };
        if !ok {
            return Err(format!("B_{m} = {b} breaks the sign pattern"));
        }
    }
    Ok("B_2..B_60".into())
}

fn tanh_series() -> std::result::Result<String, String> {
    let mut worst: f64 = 0.0;
    for l in 0..=3u32 {
        for t in [0.05, 0.1, 0.2] {
            let s = tanh_moment_series(l, t, usize::MAX).map_err(|e| e.to_string())?;
            let q = tanh_moment_quadrature(l, t).map_err(|e| e.to_string())?;
            let diff = (s.value - q.value).abs();
            let bound = s.first_omitted + q.error + 8.0 * f64::EPSILON * q.value.abs();
            if diff > bound {
                return Err(format!("l={l} t={t}: |{} - {}| > {bound:e}", s.value, q.value));
            }
            worst = worst.max(diff / q.value.abs());
        }
    }
    Ok(format!("max rel diff {worst:.2e}"))
}

fn synthetic(n: u32) -> std::result::Result<ManifoldData, String> {
    let spectrum = synth_spectrum(7, 5, 1.0, 3, n).map_err(|e| e.to_string())?;
    ManifoldData::new(n, 8.0 * std::f64::consts::PI, spectrum).map_err(|e| e.to_string())
}

fn mellin_vs_bessel() -> std::result::Result<String, String> {
    let mut worst: f64 = 0.0;
    for n in [2u32, 4, 6] {
        let m = synthetic(n)?;
        for p in 0..(n / 2) as i64 {
            for s in [0.3, 0.5, 0.7] {
                let closed = mellin_hyperbolic(&m, p, s).map_err(|e| e.to_string())?;
                let quad = mellin_hyperbolic_quadrature(&m, p, s).map_err(|e| e.to_string())?;
                let rel = ((closed - quad.value) / quad.value).abs();
                if !(rel <= MELLIN_REL_TOL) {
                    return Err(format!("n={n} p={p} s={s}: rel diff {rel:e}"));
                }
                worst = worst.max(rel);
            }
        }
    }
    Ok(format!("max rel diff {worst:.2e}"))
}

fn hyperbolic_scaling() -> std::result::Result<String, String> {
    for n in [2u32, 4, 6] {
        let m = synthetic(n)?;
        for p in 0..(n / 2) as i64 {
            let z2 = zeta_hyperbolic(&m, p, 1e-2).map_err(|e| e.to_string())?;
            let z3 = zeta_hyperbolic(&m, p, 1e-3).map_err(|e| e.to_string())?;
            let ratio = z2 / z3;
            if !((ratio - 10.0).abs() <= 10.0 * SCALING_RATIO_TOL) {
                return Err(format!("n={n} p={p}: ratio {ratio}"));
            }
            let identity = m.chi_one()
                * m.volume()
                * crate::exact_arith::to_f64(&identity_sector_zeta_zero(n, p).map_err(|e| e.to_string())?);
            if !(z3.abs() < SCALING_MAGNITUDE_FACTOR * identity.abs()) {
                return Err(format!("n={n} p={p}: |zeta_H(1e-3)| = {z3:e} vs identity {identity:e}"));
            }
        }
    }
    Ok("ratio within 10 +- 2%".into())
}

fn identity_bridge() -> std::result::Result<String, String> {
    let mut worst: f64 = 0.0;
    for n in [2u32, 4, 6] {
        let m = ManifoldData::new(n, 1.0, vec![]).map_err(|e| e.to_string())?;
        for q in 0..n as i64 {
            let exact = crate::exact_arith::to_f64(&identity_sector_zeta_zero(n, q).map_err(|e| e.to_string())?);
            let numeric = identity_zeta_zero_extrapolated(&m, q, 1e-3).map_err(|e| e.to_string())?;
            let rel = ((numeric - exact) / exact).abs();
            if !(rel <= BRIDGE_REL_TOL) {
                return Err(format!("n={n} q={q}: {numeric} vs {exact}"));
            }
            worst = worst.max(rel);
        }
        // the assembled co-exact sector reproduces the anomaly bracket for p <= 1
        for p in 0..(n / 2).min(2) {
            let alpha = integer(p as i64) + rho0_squared(n);
            let mut bracket = Rational::zero();
            for j in 0..=p {
                bracket += zeta_identity_at_zero(n, p, j, &alpha).map_err(|e| e.to_string())?;
            }
            let k = n / 2;
            let scale = pow(&integer(2), 2 * (n as i32 - 1))
                * Rational::from_integer(crate::exact_arith::factorial(k - 1)).pow(2);
            let assembled = coexact_identity_zeta_zero(n, p).map_err(|e| e.to_string())? * scale;
            if assembled != bracket {
                return Err(format!("n={n} p={p}: assembled {assembled} != bracket {bracket}"));
            }
        }
    }
    Ok(format!("max rel diff {worst:.2e}"))
}

fn timed(
    name: &'static str,
    f: impl FnOnce() -> std::result::Result<String, String>,
) -> CheckOutcome {
    let start = Instant::now();
    let result = f();
    let seconds = start.elapsed().as_secs_f64();
    match result {
        Ok(detail) => CheckOutcome { name, passed: true, detail, seconds },
        Err(detail) => CheckOutcome { name, passed: false, detail, seconds },
    }
}

/// Runs every check; `fast` skips the quadrature-heavy ones.
pub fn run_checks(golden: &Golden, fast: bool) -> Vec<CheckOutcome> {
    let mut out = vec![
        timed("golden-table1", || golden_table(&golden.table1, true)),
        timed("golden-table2", || golden_table(&golden.table2, false)),
        timed("scalar-specialization", scalar_specialization),
        timed("plancherel-properties", plancherel_properties),
        timed("bernoulli-pattern", bernoulli_pattern),
    ];
    if !fast {
        out.push(timed("tanh-series-vs-quadrature", tanh_series));
        out.push(timed("mellin-vs-bessel", mellin_vs_bessel));
        out.push(timed("hyperbolic-s-to-zero", hyperbolic_scaling));
        out.push(timed("identity-zeta-bridge", identity_bridge));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::rational;

    #[test]
    fn printed_comparison() {
        let v = PiValue::new(rational(-1, 12), 1);
        assert!(matches_printed(&v, "-0.0265258").unwrap());
        assert!(!matches_printed(&v, "-0.0265248").unwrap());
        let v = PiValue::new(rational(-23, 34560), 4);
        assert!(matches_printed(&v, "-6.83210e-6").unwrap());
        assert!(matches_printed(&v, "-6.83211e-6").unwrap());
        assert!(!matches_printed(&v, "-6.83208e-6").unwrap());
    }

    #[test]
    fn fast_checks_pass() {
        let results = run_checks(&Golden::embedded(), true);
        assert_eq!(results.len(), 5);
        for r in results {
            assert!(r.passed, "{}: {}", r.name, r.detail);
        }
    }

    #[test]
    fn corrupted_golden_fails_by_name() {
        let mut g = Golden::embedded();
        g.table2[3].exact = "1/2 * pi^-3".into();
        let results = run_checks(&g, true);
        let bad: Vec<_> = results.iter().filter(|r| !r.passed).map(|r| r.name).collect();
        assert_eq!(bad, vec!["golden-table2"]);
        assert!(Golden::parse("table1 = 3", Path::new("x.toml")).is_err());
    }
}
