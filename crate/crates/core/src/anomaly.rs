//! Exact conformal anomaly of co-exact p-forms on Gamma\H^n.
//!
//! For n = 2k and 0 <= p < k the trace of the stress tensor is
//!
//! ```text
//! <T> = 1/((4 pi)^k Gamma(k) R^n) * sum_{j=0}^{p} (-1)^j sum_{l=0}^{k-1}
//!         (-1)^{l+1}/(l+1) C(n-1, p-j)
//!         [ a_{2l}^{(p-j)}   ((1 - 2^{-2l-1}) B_{2l+2} + (alpha-j)^{l+1})
//!         + a_{2l}^{(p-j-1)} (p-j)/(n-p) ((1 - 2^{-2l-1}) B_{2l+2} + (alpha-j-1)^{l+1}) ]
//! ```
//!
//! with a^{(-1)} = 0. Every quantity is an exact rational; the result carries
//! the factor pi^{-k} symbolically.

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact_arith::{
    bernoulli, binomial, half_gamma, integer, inv_pow2, pow, rational, PiValue, Rational,
};
use crate::plancherel::miatello_coefficients;

/// Checks n is even and >= 2 and returns k = n/2.
pub fn half_dimension(n: u32) -> Result<u32> {
    if n % 2 == 1 {
        return Err(Error::OddDimension(n as i64));
    }
    if n < 2 {
        return Err(Error::DimensionTooSmall(n as i64));
    }
    Ok(n / 2)
}

/// rho_0^2 = ((n-1)/2)^2.
pub fn rho0_squared(n: u32) -> Rational {
    let rho = rational(n as i64 - 1, 2);
    &rho * &rho
}

/// alpha = p + rho_0^2, the value used for p-form tables.
pub fn alpha_default(n: u32, p: u32) -> Result<Rational> {
    half_dimension(n)?;
    Ok(integer(p as i64) + rho0_squared(n))
}

/// alpha = rho_0^2 + (n-2) R^2 R(x) / (4(n-1)) with scalar curvature
/// R(x) = -n(n-1)/R^2; always 1/4.
pub fn alpha_conformal_scalar(n: u32) -> Result<Rational> {
    half_dimension(n)?;
    let n_r = integer(n as i64);
    let curvature_r2 = -(&n_r * (&n_r - integer(1)));
    let alpha = rho0_squared(n) + (&n_r - integer(2)) * curvature_r2 / (integer(4) * (&n_r - integer(1)));
    assert_eq!(alpha, rational(1, 4), "conformal coupling must give alpha = 1/4");
    Ok(alpha)
}

/// alpha = rho_0^2 + m^2 R^2 for a minimally coupled massive scalar.
pub fn alpha_massive_scalar(n: u32, mass_sq_r_sq: &Rational) -> Result<Rational> {
    half_dimension(n)?;
    if *mass_sq_r_sq < Rational::zero() {
        return Err(Error::InvalidArgument(format!(
            "mass squared must be non-negative, got {mass_sq_r_sq}"
        )));
    }
    Ok(rho0_squared(n) + mass_sq_r_sq)
}

/// How the spectral shift alpha was chosen.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlphaPolicy {
    /// p + rho_0^2.
    Default,
    /// Conformally coupled scalar (p = 0), alpha = 1/4.
    ConformalScalar,
    /// Minimally coupled scalar (p = 0) with m^2 R^2 given.
    MassiveScalar(Rational),
    /// Caller-supplied value.
    Custom(Rational),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnomalySpec {
    dimension: u32,
    form_order: u32,
    policy: AlphaPolicy,
    alpha: Rational,
    radius: Rational,
    volume: Option<Rational>,
    chi_one: Rational,
}

impl AnomalySpec {
    pub fn new(dimension: u32, form_order: u32, policy: AlphaPolicy) -> Result<Self> {
        let k = half_dimension(dimension)?;
        if form_order >= k {
            return Err(Error::MiddleDegree {
                n: dimension,
                p: form_order as i64,
            });
        }
        let scalar_only = |name: &str| -> Result<()> {
            if form_order != 0 {
                return Err(Error::InvalidArgument(format!(
                    "{name} alpha applies to scalars (p = 0), got p = {form_order}"
                )));
            }
            Ok(())
        };
        let alpha = match &policy {
            AlphaPolicy::Default => alpha_default(dimension, form_order)?,
            AlphaPolicy::ConformalScalar => {
                scalar_only("conformal-scalar")?;
                alpha_conformal_scalar(dimension)?
            }
            AlphaPolicy::MassiveScalar(m2) => {
                scalar_only("massive")?;
                alpha_massive_scalar(dimension, m2)?
            }
            AlphaPolicy::Custom(a) => a.clone(),
        };
        Ok(Self {
            dimension,
            form_order,
            policy,
            alpha,
            radius: Rational::one(),
            volume: None,
            chi_one: Rational::one(),
        })
    }

    /// Radius R of the compact section; the anomaly scales as R^{-n}.
    pub fn with_radius(mut self, radius: Rational) -> Result<Self> {
        if radius <= Rational::zero() {
            return Err(Error::InvalidArgument(format!("radius must be positive, got {radius}")));
        }
        self.radius = radius;
        Ok(self)
    }

    /// Vol(Gamma\G); when set, zeta(0) is reported alongside the anomaly.
    pub fn with_volume(mut self, volume: Rational) -> Result<Self> {
        if volume <= Rational::zero() {
            return Err(Error::InvalidArgument(format!("volume must be positive, got {volume}")));
        }
        self.volume = Some(volume);
        Ok(self)
    }

    /// Linear multiplier chi(1) applied to zeta(0) (1 for an untwisted bundle).
    pub fn with_chi_one(mut self, chi_one: Rational) -> Self {
        self.chi_one = chi_one;
        self
    }

    pub fn dimension(&self) -> u32 {
        self.dimension
    }

    pub fn form_order(&self) -> u32 {
        self.form_order
    }

    pub fn alpha(&self) -> &Rational {
        &self.alpha
    }

    pub fn policy(&self) -> &AlphaPolicy {
        &self.policy
    }

    pub fn radius(&self) -> &Rational {
        &self.radius
    }
}

/// One (j, l) summand of the anomaly, before the global prefactor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnomalyTerm {
    pub j: u32,
    pub l: u32,
    pub value: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnomalyResult {
    pub value: PiValue,
    /// zeta(0) = value * chi(1) * Vol * R^n, present when a volume was given.
    pub zeta_zero: Option<PiValue>,
    /// 1/((4 pi)^k Gamma(k) R^n) without the pi power.
    pub prefactor: Rational,
    pub breakdown: Vec<AnomalyTerm>,
}

impl AnomalyResult {
    /// Re-sum the breakdown and apply the prefactor.
    pub fn resummed(&self) -> PiValue {
        let sum = self
            .breakdown
            .iter()
            .fold(Rational::zero(), |acc, t| acc + &t.value);
        PiValue::new(sum * &self.prefactor, self.value.pi_exponent())
    }
}

/// (1 - 2^{-2l-1}) B_{2l+2}
fn bernoulli_part(l: u32) -> Rational {
    (Rational::one() - inv_pow2(2 * l + 1)) * bernoulli(2 * l as usize + 2)
}

/// The l-summands of the anomaly bracket for fixed j, sign (-1)^j included.
pub(crate) fn sector_terms(n: u32, p: u32, j: u32, alpha: &Rational) -> Result<Vec<AnomalyTerm>> {
    let k = half_dimension(n)?;
    if p >= k {
        return Err(Error::MiddleDegree { n, p: p as i64 });
    }
    if j > p {
        return Err(Error::OutOfRange {
            what: "j",
            value: j as i64,
            min: 0,
            max: p as i64,
        });
    }
    let q = (p - j) as i64;
    let upper = miatello_coefficients(k, q)?;
    let lower = miatello_coefficients(k, q - 1)?;
    let binom = binomial(n - 1, q);
    let ratio = rational(q, (n - p) as i64);
    let shift_upper = alpha - integer(j as i64);
    let shift_lower = alpha - integer(j as i64 + 1);
    let j_sign = if j % 2 == 0 { integer(1) } else { integer(-1) };

    let mut terms = Vec::with_capacity(k as usize);
    for l in 0..k {
        let b = bernoulli_part(l);
        let e = l as i32 + 1;
        let li = l as usize;
        let mut bracket = &upper[li] * (&b + pow(&shift_upper, e));
        if !lower[li].is_zero() {
            bracket += &lower[li] * &ratio * (&b + pow(&shift_lower, e));
        }
        let l_sign = if l % 2 == 0 { -1 } else { 1 };
        let value = &j_sign * rational(l_sign, l as i64 + 1) * &binom * bracket;
        terms.push(AnomalyTerm { j, l, value });
    }
    Ok(terms)
}

fn prefactor(n: u32, radius: &Rational) -> Result<Rational> {
    let k = half_dimension(n)?;
    Ok((pow(&integer(4), k as i32) * half_gamma(n)? * pow(radius, n as i32)).recip())
}

fn finish(
    n: u32,
    radius: &Rational,
    volume: Option<&Rational>,
    chi_one: &Rational,
    breakdown: Vec<AnomalyTerm>,
) -> Result<AnomalyResult> {
    let k = n / 2;
    let pref = prefactor(n, radius)?;
    let sum = breakdown
        .iter()
        .fold(Rational::zero(), |acc, t| acc + &t.value);
    let value = PiValue::new(&sum * &pref, k);
    let zeta_zero = volume.map(|vol| value.scale(&(vol * pow(radius, n as i32) * chi_one)));
    Ok(AnomalyResult {
        value,
        zeta_zero,
        prefactor: pref,
        breakdown,
    })
}

/// The conformal anomaly for a p-form field.
pub fn conformal_anomaly(spec: &AnomalySpec) -> Result<AnomalyResult> {
    let (n, p) = (spec.dimension, spec.form_order);
    let mut breakdown = Vec::new();
    for j in 0..=p {
        breakdown.extend(sector_terms(n, p, j, &spec.alpha)?);
    }
    finish(n, &spec.radius, spec.volume.as_ref(), &spec.chi_one, breakdown)
}

/// Conformally invariant scalar field, evaluated from its own closed form
/// sum_l (-1)^{l+1}/(l+1) a_{2l} [2^{-2l-2} + (1 - 2^{-2l-1}) B_{2l+2}].
pub fn conformal_scalar_anomaly(n: u32) -> Result<AnomalyResult> {
    let k = half_dimension(n)?;
    if n > 40 {
        return Err(Error::OutOfRange {
            what: "n",
            value: n as i64,
            min: 2,
            max: 40,
        });
    }
    let a = miatello_coefficients(k, 0)?;
    let breakdown = (0..k)
        .map(|l| {
            let sign = if l % 2 == 0 { -1 } else { 1 };
            let bracket = inv_pow2(2 * l + 2) + bernoulli_part(l);
            AnomalyTerm {
                j: 0,
                l,
                value: rational(sign, l as i64 + 1) * &a[l as usize] * bracket,
            }
        })
        .collect();
    finish(n, &Rational::one(), None, &Rational::one(), breakdown)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableKind {
    /// Conformal scalar, one row per dimension (defaults n = 2..14).
    Scalar,
    /// p-forms with alpha = p + rho_0^2 (defaults n = 2..10, p = 0..4).
    PForm,
    /// Caller-chosen grid with the default alpha.
    Custom,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CellEntry {
    Value(AnomalyResult),
    Excluded(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableCell {
    pub dimension: u32,
    pub form_order: u32,
    pub entry: CellEntry,
}

impl TableCell {
    pub fn value(&self) -> Option<&PiValue> {
        match &self.entry {
            CellEntry::Value(r) => Some(&r.value),
            CellEntry::Excluded(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnomalyTable {
    pub kind: TableKind,
    pub dims: Vec<u32>,
    pub forms: Vec<u32>,
    /// Row-major over `dims` x `forms`.
    pub cells: Vec<TableCell>,
}

impl AnomalyTable {
    pub fn populated(&self) -> impl Iterator<Item = &TableCell> {
        self.cells.iter().filter(|c| c.value().is_some())
    }
}

/// Evaluate a grid of anomaly values. Invalid (n, p) combinations are kept
/// as [`CellEntry::Excluded`]. Cells are computed in parallel; output order
/// is row-major and deterministic.
pub fn generate_table(
    kind: TableKind,
    dims: Option<&[u32]>,
    forms: Option<&[u32]>,
) -> Result<AnomalyTable> {
    let (dims, forms): (Vec<u32>, Vec<u32>) = match kind {
        TableKind::Scalar => (
            dims.map(<[u32]>::to_vec).unwrap_or_else(|| (1..=7).map(|i| 2 * i).collect()),
            vec![0],
        ),
        TableKind::PForm => (
            dims.map(<[u32]>::to_vec).unwrap_or_else(|| (1..=5).map(|i| 2 * i).collect()),
            forms.map(<[u32]>::to_vec).unwrap_or_else(|| (0..=4).collect()),
        ),
        TableKind::Custom => (
            dims.map(<[u32]>::to_vec)
                .ok_or_else(|| Error::InvalidArgument("custom table needs dimensions".into()))?,
            forms.map(<[u32]>::to_vec)
                .ok_or_else(|| Error::InvalidArgument("custom table needs form orders".into()))?,
        ),
    };
    let grid: Vec<(u32, u32)> = dims
        .iter()
        .flat_map(|&n| forms.iter().map(move |&p| (n, p)))
        .collect();
    let cells = grid
        .par_iter()
        .map(|&(n, p)| {
            let outcome = match kind {
                TableKind::Scalar => conformal_scalar_anomaly(n),
                _ => AnomalySpec::new(n, p, AlphaPolicy::Default).and_then(|s| conformal_anomaly(&s)),
            };
            let entry = match outcome {
                Ok(result) => CellEntry::Value(result),
                Err(e) => CellEntry::Excluded(e.to_string()),
            };
            TableCell {
                dimension: n,
                form_order: p,
                entry,
            }
        })
        .collect();
    Ok(AnomalyTable {
        kind,
        dims,
        forms,
        cells,
    })
}
