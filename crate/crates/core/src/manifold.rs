//! Spectral input data for a compact hyperbolic manifold Gamma\H^n and the
//! versioned TOML file format that stores it.
//!
//! ```toml
//! format_version = 1
//! dimension = 2
//! volume = 25.132741228718345   # Vol(Gamma\G)
//! chi_one = 1.0                 # optional, default 1
//! radius = 1.0                  # optional, default 1
//! betti = [1, 4, 1]             # optional, b_0..b_n
//!
//! [[geodesics]]
//! length = 2.5                  # t_gamma > 0
//! power = 1                     # j(gamma) >= 1, default 1
//! c_gamma = 0.31                # optional, default: trivial holonomy value
//! chi = 1.0                     # optional, default 1
//! holonomy = "trivial"          # or a list chi_{sigma_p}(m_gamma), p = 0..n-1
//! ```

use std::fs;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_arith::{binomial, to_f64};

pub const FORMAT_VERSION: u32 = 1;

/// chi_{sigma_p}(m_gamma) for a closed geodesic.
#[derive(Debug, Clone, PartialEq)]
pub enum Holonomy {
    /// m_gamma = 1, so chi_{sigma_p} = dim Lambda^p C^{n-1} = C(n-1, p).
    Trivial,
    /// Explicit characters for p = 0..n-1.
    Characters(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeodesicClass {
    pub length: f64,
    pub power: u32,
    pub c_gamma: f64,
    pub chi: f64,
    pub holonomy: Holonomy,
}

impl GeodesicClass {
    /// A geodesic with trivial holonomy, chi = 1 and C(gamma) from
    /// [`trivial_holonomy_c`].
    pub fn trivial(n: u32, length: f64, power: u32) -> Result<Self> {
        Ok(Self {
            length,
            power,
            c_gamma: trivial_holonomy_c(n, length)?,
            chi: 1.0,
            holonomy: Holonomy::Trivial,
        })
    }

    /// chi_{sigma_p}(m_gamma); zero for p = -1.
    pub fn character(&self, n: u32, p: i64) -> f64 {
        if p < 0 {
            return 0.0;
        }
        match &self.holonomy {
            Holonomy::Trivial => to_f64(&binomial(n - 1, p)),
            Holonomy::Characters(values) => values.get(p as usize).copied().unwrap_or(0.0),
        }
    }

    /// chi(gamma) / j(gamma) * t_gamma * C(gamma), the p-independent weight.
    pub fn weight(&self) -> f64 {
        self.chi / self.power as f64 * self.length * self.c_gamma
    }
}

/// C(gamma) = e^{-rho_0 t} |det(Ad(m e^{t H_0})^{-1} - 1)|^{-1} for m = 1.
///
/// With trivial holonomy Ad(e^{t H_0})^{-1} acts on n_0 (dimension n-1) as
/// e^{-t}, so the determinant is (e^{-t} - 1)^{n-1} and
/// C = e^{-rho_0 t} (1 - e^{-t})^{-(n-1)}.
pub fn trivial_holonomy_c(n: u32, t: f64) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::InvalidArgument(format!("length must be positive, got {t}")));
    }
    let rho0 = (n as f64 - 1.0) / 2.0;
    Ok((-rho0 * t).exp() * (-(-t).exp_m1()).powi(-(n as i32 - 1)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ManifoldData {
    dimension: u32,
    volume: f64,
    chi_one: f64,
    betti: Option<Vec<u64>>,
    geodesics: Vec<GeodesicClass>,
    radius: f64,
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::Manifold(msg.into())
}

impl ManifoldData {
    /// Validates the data; geodesics are sorted by length (stable).
    pub fn new(dimension: u32, volume: f64, mut geodesics: Vec<GeodesicClass>) -> Result<Self> {
        if dimension % 2 == 1 {
            return Err(Error::OddDimension(dimension as i64));
        }
        if dimension < 2 {
            return Err(Error::DimensionTooSmall(dimension as i64));
        }
        if !(volume > 0.0) || !volume.is_finite() {
            return Err(invalid(format!("volume must be positive, got {volume}")));
        }
        for (i, g) in geodesics.iter().enumerate() {
            if !(g.length > 0.0) || !g.length.is_finite() {
                return Err(invalid(format!("geodesic {i}: length must be positive (got {})", g.length)));
            }
            if g.power < 1 {
                return Err(invalid(format!("geodesic {i}: power must be at least 1")));
            }
            if !(g.c_gamma > 0.0) || !g.c_gamma.is_finite() {
                return Err(invalid(format!("geodesic {i}: c_gamma must be positive (got {})", g.c_gamma)));
            }
            if !g.chi.is_finite() {
                return Err(invalid(format!("geodesic {i}: chi must be finite")));
            }
            if let Holonomy::Characters(values) = &g.holonomy {
                if values.len() != dimension as usize {
                    return Err(invalid(format!(
                        "geodesic {i}: holonomy needs {dimension} characters (p = 0..n-1), got {}",
                        values.len()
                    )));
                }
            }
        }
        geodesics.sort_by(|a, b| a.length.total_cmp(&b.length));
        Ok(Self {
            dimension,
            volume,
            chi_one: 1.0,
            betti: None,
            geodesics,
            radius: 1.0,
        })
    }

    pub fn with_betti(mut self, betti: Vec<u64>) -> Result<Self> {
        if betti.len() != self.dimension as usize + 1 {
            return Err(invalid(format!(
                "betti list must have n+1 = {} entries, got {}",
                self.dimension + 1,
                betti.len()
            )));
        }
        self.betti = Some(betti);
        Ok(self)
    }

    pub fn with_chi_one(mut self, chi_one: f64) -> Result<Self> {
        if !chi_one.is_finite() {
            return Err(invalid("chi_one must be finite"));
        }
        self.chi_one = chi_one;
        Ok(self)
    }

    pub fn with_radius(mut self, radius: f64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(invalid(format!("radius must be positive, got {radius}")));
        }
        self.radius = radius;
        Ok(self)
    }

    pub fn dimension(&self) -> u32 {
        self.dimension
    }

    pub fn half_dimension(&self) -> u32 {
        self.dimension / 2
    }

    pub fn rho0_squared(&self) -> f64 {
        let rho0 = (self.dimension as f64 - 1.0) / 2.0;
        rho0 * rho0
    }

    pub fn volume(&self) -> f64 {
        self.volume
    }

    pub fn chi_one(&self) -> f64 {
        self.chi_one
    }

    pub fn betti(&self) -> Option<&[u64]> {
        self.betti.as_deref()
    }

    pub fn geodesics(&self) -> &[GeodesicClass] {
        &self.geodesics
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn from_toml_str(text: &str, origin: &Path) -> Result<Self> {
        let file: ManifoldFile = toml::from_str(text).map_err(|e| Error::Parse {
            path: origin.to_path_buf(),
            message: e.to_string(),
        })?;
        file.into_data()
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::Io {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        Self::from_toml_str(&text, path)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(&ManifoldFile::from(self)).expect("manifold data serializes")
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_toml_string()).map_err(|e| Error::Io {
            path: path.to_path_buf(),
            message: e.to_string(),
        })
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ManifoldFile {
    format_version: u32,
    dimension: i64,
    volume: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    chi_one: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    betti: Option<Vec<u64>>,
    #[serde(default)]
    geodesics: Vec<GeodesicEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GeodesicEntry {
    length: f64,
    #[serde(default = "one")]
    power: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    c_gamma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    chi: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    holonomy: Option<HolonomyEntry>,
}

fn one() -> u32 {
    1
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum HolonomyEntry {
    Marker(String),
    Characters(Vec<f64>),
}

impl ManifoldFile {
    fn into_data(self) -> Result<ManifoldData> {
        if self.format_version != FORMAT_VERSION {
            return Err(invalid(format!(
                "unsupported format_version {} (expected {FORMAT_VERSION})",
                self.format_version
            )));
        }
        if self.dimension < 0 || self.dimension > u32::MAX as i64 {
            return Err(invalid(format!("dimension out of range: {}", self.dimension)));
        }
        let n = self.dimension as u32;
        if n % 2 == 1 {
            return Err(Error::OddDimension(self.dimension));
        }
        let mut geodesics = Vec::with_capacity(self.geodesics.len());
        for (i, g) in self.geodesics.into_iter().enumerate() {
            if !(g.length > 0.0) {
                return Err(invalid(format!("geodesic {i}: length must be positive (got {})", g.length)));
            }
            let holonomy = match g.holonomy {
                None => Holonomy::Trivial,
                Some(HolonomyEntry::Marker(m)) if m == "trivial" => Holonomy::Trivial,
                Some(HolonomyEntry::Marker(m)) => {
                    return Err(invalid(format!(
                        "geodesic {i}: holonomy must be \"trivial\" or a list of characters, got {m:?}"
                    )))
                }
                Some(HolonomyEntry::Characters(c)) => Holonomy::Characters(c),
            };
            let c_gamma = match g.c_gamma {
                Some(c) => c,
                None if holonomy == Holonomy::Trivial => trivial_holonomy_c(n.max(2), g.length)?,
                None => {
                    return Err(invalid(format!(
                        "geodesic {i}: c_gamma is required for non-trivial holonomy"
                    )))
                }
            };
            geodesics.push(GeodesicClass {
                length: g.length,
                power: g.power,
                c_gamma,
                chi: g.chi.unwrap_or(1.0),
                holonomy,
            });
        }
        let mut data = ManifoldData::new(n, self.volume, geodesics)?;
        if let Some(chi_one) = self.chi_one {
            data = data.with_chi_one(chi_one)?;
        }
        if let Some(radius) = self.radius {
            data = data.with_radius(radius)?;
        }
        if let Some(betti) = self.betti {
            data = data.with_betti(betti)?;
        }
        Ok(data)
    }
}

impl From<&ManifoldData> for ManifoldFile {
    fn from(data: &ManifoldData) -> Self {
        ManifoldFile {
            format_version: FORMAT_VERSION,
            dimension: data.dimension as i64,
            volume: data.volume,
            chi_one: Some(data.chi_one),
            radius: Some(data.radius),
            betti: data.betti.clone(),
            geodesics: data
                .geodesics
                .iter()
                .map(|g| GeodesicEntry {
                    length: g.length,
                    power: g.power,
                    c_gamma: Some(g.c_gamma),
                    chi: Some(g.chi),
                    holonomy: Some(match &g.holonomy {
                        Holonomy::Trivial => HolonomyEntry::Marker("trivial".into()),
                        Holonomy::Characters(c) => HolonomyEntry::Characters(c.clone()),
                    }),
                })
                .collect(),
        }
    }
}

/// Deterministic pseudo-random spectrum: `count` primitive lengths drawn
/// uniformly from [min_length, min_length + 10), each expanded into its
/// iterates delta^j, j = 1..=max_power, with length j * t_delta. Trivial
/// holonomy throughout; sorted by length.
pub fn synth_spectrum(
    seed: u64,
    count: usize,
    min_length: f64,
    max_power: u32,
    n: u32,
) -> Result<Vec<GeodesicClass>> {
    if !(min_length > 0.0) || !min_length.is_finite() {
        return Err(Error::InvalidArgument(format!("min_length must be positive, got {min_length}")));
    }
    if n % 2 == 1 {
        return Err(Error::OddDimension(n as i64));
    }
    if n < 2 {
        return Err(Error::DimensionTooSmall(n as i64));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count * max_power as usize);
    for _ in 0..count {
        let primitive: f64 = rng.gen_range(min_length..min_length + 10.0);
        for j in 1..=max_power {
            out.push(GeodesicClass::trivial(n, j as f64 * primitive, j)?);
        }
    }
    out.sort_by(|a, b| a.length.total_cmp(&b.length));
    Ok(out)
}
