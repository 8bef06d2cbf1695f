//! Command-line front end. [`run`] does the work so tests can drive it
//! in-process; the binary only forwards its arguments and exit code.
//!
//! Exit codes: 0 success, 1 a check failed, 2 usage or input error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::anomaly::{
    conformal_anomaly, generate_table, AlphaPolicy, AnomalySpec, TableKind,
};
use crate::error::{Error, Result};
use crate::exact_arith::{format_significant, from_f64, to_f64, Rational};
use crate::heat_zeta::{
    coexact_trace, heat_trace, identity_sector_zeta_zero, identity_zeta_zero_extrapolated,
    mellin_hyperbolic, mellin_hyperbolic_quadrature, zeta_hyperbolic, HeatTraceBreakdown,
};
use crate::manifold::{synth_spectrum, ManifoldData};
use crate::plancherel::{miatello_coefficients, plancherel_density, plancherel_polynomial};
use crate::report::{display_digits, OutputTable, TableFormat};
use crate::verify::{self, Golden, MELLIN_REL_TOL, SCALING_MAGNITUDE_FACTOR, SCALING_RATIO_TOL};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "hyperzeta", version, about = "Exact conformal anomalies and heat-kernel tools on compact hyperbolic manifolds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exact conformal anomaly of a p-form field.
    Anomaly(AnomalyArgs),
    /// Tables of anomalies over dimensions and form orders.
    Table(TableArgs),
    /// Plancherel polynomial, its coefficients, and the density.
    Plancherel(PlancherelArgs),
    /// Heat trace of a manifold file.
    HeatTrace(HeatTraceArgs),
    /// Numerical cross-checks of the zeta function for a manifold file.
    ZetaCheck(ZetaCheckArgs),
    /// Write a deterministic synthetic manifold file.
    SynthSpectrum(SynthArgs),
    /// Run the built-in self-check suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum AlphaMode {
    Default,
    ConformalScalar,
    Massive,
    Custom,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ValueFormat {
    Exact,
    Float,
    Both,
}

#[derive(Debug, Args)]
struct AnomalyArgs {
    #[arg(long = "dim")]
    dim: u32,
    #[arg(long = "form", default_value_t = 0)]
    form: u32,
    #[arg(long, value_enum, default_value_t = AlphaMode::Default)]
    alpha_mode: AlphaMode,
    /// m^2 R^2 for --alpha-mode massive.
    #[arg(long, value_parser = parse_rational)]
    mass_sq: Option<Rational>,
    /// alpha for --alpha-mode custom.
    #[arg(long, value_parser = parse_rational, allow_hyphen_values = true)]
    alpha: Option<Rational>,
    #[arg(long, value_parser = parse_rational)]
    radius: Option<Rational>,
    /// Vol(Gamma\G); also prints zeta(0).
    #[arg(long, value_parser = parse_rational)]
    volume: Option<Rational>,
    #[arg(long, value_enum, default_value_t = ValueFormat::Both)]
    format: ValueFormat,
    /// List the (j, l) summands.
    #[arg(long)]
    breakdown: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Which {
    Table1,
    Table2,
    Custom,
}

#[derive(Debug, Args)]
struct TableArgs {
    #[arg(long, value_enum, default_value_t = Which::Table2)]
    which: Which,
    #[arg(long, value_delimiter = ',')]
    dims: Option<Vec<u32>>,
    #[arg(long, value_delimiter = ',')]
    forms: Option<Vec<u32>>,
    #[arg(long, value_enum, default_value_t = TableFormat::Markdown)]
    format: TableFormat,
}

#[derive(Debug, Args)]
struct PlancherelArgs {
    #[arg(long = "dim")]
    dim: u32,
    #[arg(long = "form", default_value_t = 0)]
    form: u32,
    /// Points at which to evaluate the density.
    #[arg(long = "r", value_delimiter = ',', allow_hyphen_values = true)]
    r: Vec<f64>,
}

#[derive(Debug, Args)]
struct HeatTraceArgs {
    #[arg(long)]
    manifold: PathBuf,
    #[arg(long = "form", default_value_t = 0)]
    form: i64,
    #[arg(long = "t", value_delimiter = ',', required = true)]
    t: Vec<f64>,
    /// Co-exact trace; needs Betti numbers in the file.
    #[arg(long)]
    coexact: bool,
}

#[derive(Debug, Args)]
struct ZetaCheckArgs {
    #[arg(long)]
    manifold: PathBuf,
    #[arg(long = "form", default_value_t = 0)]
    form: i64,
    #[arg(long = "s", value_delimiter = ',', default_values_t = vec![0.3, 0.5, 0.7])]
    s: Vec<f64>,
}

#[derive(Debug, Args)]
struct SynthArgs {
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[arg(long, default_value_t = 5)]
    count: usize,
    #[arg(long, default_value_t = 1.0)]
    min_length: f64,
    #[arg(long, default_value_t = 3)]
    max_power: u32,
    #[arg(long = "dim")]
    dim: u32,
    #[arg(long, default_value_t = 8.0 * std::f64::consts::PI)]
    volume: f64,
    #[arg(long, value_delimiter = ',')]
    betti: Option<Vec<u64>>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Skip the quadrature-heavy checks.
    #[arg(long)]
    fast: bool,
    /// Golden tables file replacing the built-in one.
    #[arg(long)]
    golden: Option<PathBuf>,
}

fn parse_rational(text: &str) -> std::result::Result<Rational, String> {
    crate::exact_arith::parse_rational(text).map_err(|e| e.to_string())
}

fn fmt_float(x: f64, digits: usize) -> String {
    match from_f64(x) {
        Some(r) => format_significant(&r, digits),
        None => x.to_string(),
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };
    let result = match cli.command {
        Command::Anomaly(a) => cmd_anomaly(a, out),
        Command::Table(a) => cmd_table(a, out),
        Command::Plancherel(a) => cmd_plancherel(a, out),
        Command::HeatTrace(a) => cmd_heat_trace(a, out, err),
        Command::ZetaCheck(a) => cmd_zeta_check(a, out),
        Command::SynthSpectrum(a) => cmd_synth(a, out),
        Command::Verify(a) => cmd_verify(a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn io_err(e: std::io::Error) -> Error {
    Error::Io { path: PathBuf::from("<stdout>"), message: e.to_string() }
}

fn cmd_anomaly(a: AnomalyArgs, out: &mut dyn Write) -> Result<i32> {
    let policy = match a.alpha_mode {
        AlphaMode::Default => AlphaPolicy::Default,
        AlphaMode::ConformalScalar => AlphaPolicy::ConformalScalar,
        AlphaMode::Massive => AlphaPolicy::MassiveScalar(a.mass_sq.ok_or_else(|| {
            Error::InvalidArgument("--alpha-mode massive needs --mass-sq".into())
        })?),
        AlphaMode::Custom => AlphaPolicy::Custom(a.alpha.ok_or_else(|| {
            Error::InvalidArgument("--alpha-mode custom needs --alpha".into())
        })?),
    };
    let mut spec = AnomalySpec::new(a.dim, a.form, policy)?;
    if let Some(r) = a.radius {
        spec = spec.with_radius(r)?;
    }
    if let Some(v) = a.volume {
        spec = spec.with_volume(v)?;
    }
    let result = conformal_anomaly(&spec)?;
    let digits = display_digits();
    let show = |v: &crate::exact_arith::PiValue| match a.format {
        ValueFormat::Exact => v.to_string(),
        ValueFormat::Float => v.to_decimal(digits),
        ValueFormat::Both => format!("{v} = {}", v.to_decimal(digits)),
    };
    writeln!(out, "{}", show(&result.value)).map_err(io_err)?;
    if let Some(z) = &result.zeta_zero {
        writeln!(out, "zeta(0) = {}", show(z)).map_err(io_err)?;
    }
    if a.breakdown {
        writeln!(out, "alpha = {}", spec.alpha()).map_err(io_err)?;
        for t in &result.breakdown {
            writeln!(out, "j={} l={} {}", t.j, t.l, t.value).map_err(io_err)?;
        }
    }
    Ok(EXIT_OK)
}

fn cmd_table(a: TableArgs, out: &mut dyn Write) -> Result<i32> {
    let kind = match a.which {
        Which::Table1 => TableKind::Scalar,
        Which::Table2 => TableKind::PForm,
        Which::Custom => TableKind::Custom,
    };
    let table = generate_table(kind, a.dims.as_deref(), a.forms.as_deref())?;
    let text = OutputTable::from_anomaly_table(&table, display_digits()).render(a.format);
    write!(out, "{text}").map_err(io_err)?;
    Ok(EXIT_OK)
}

fn cmd_plancherel(a: PlancherelArgs, out: &mut dyn Write) -> Result<i32> {
    if a.dim % 2 == 1 {
        return Err(Error::OddDimension(a.dim as i64));
    }
    let k = a.dim / 2;
    if a.form >= a.dim {
        return Err(Error::OutOfRange {
            what: "p",
            value: a.form as i64,
            min: 0,
            max: a.dim as i64 - 1,
        });
    }
    let poly = plancherel_polynomial(k, a.form)?;
    let terms: Vec<String> = poly
        .coefficients()
        .iter()
        .enumerate()
        .map(|(i, c)| format!("({c}) r^{}", 2 * i))
        .collect();
    writeln!(out, "P(r) = {}", terms.join(" + ")).map_err(io_err)?;
    let a_coeffs: Vec<String> = miatello_coefficients(k, a.form as i64)?
        .iter()
        .map(|c| c.to_string())
        .collect();
    writeln!(out, "a_2l = [{}]", a_coeffs.join(", ")).map_err(io_err)?;
    let digits = display_digits();
    for r in a.r {
        let mu = plancherel_density(k, a.form, r)?;
        writeln!(out, "mu({r}) = {}", fmt_float(mu, digits)).map_err(io_err)?;
    }
    Ok(EXIT_OK)
}

fn cmd_heat_trace(a: HeatTraceArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let m = ManifoldData::load(&a.manifold)?;
    let digits = display_digits();
    let rows = a
        .t
        .iter()
        .map(|&t| if a.coexact { coexact_trace(&m, a.form, t) } else { heat_trace(&m, a.form, t) })
        .collect::<Result<Vec<HeatTraceBreakdown>>>()?;
    if rows.iter().any(|r| r.empty_spectrum) {
        let _ = writeln!(err, "warning: no geodesics in {}; hyperbolic part is zero", a.manifold.display());
    }
    writeln!(out, "t,identity,hyperbolic,betti,total,remainder_bound").map_err(io_err)?;
    for r in rows {
        let fields: Vec<String> = [r.t, r.identity_part, r.hyperbolic_part, r.betti_part, r.total, r.hyperbolic_remainder_bound]
            .iter()
            .map(|&x| fmt_float(x, digits))
            .collect();
        writeln!(out, "{}", fields.join(",")).map_err(io_err)?;
    }
    Ok(EXIT_OK)
}

fn cmd_zeta_check(a: ZetaCheckArgs, out: &mut dyn Write) -> Result<i32> {
    let m = ManifoldData::load(&a.manifold)?;
    let n = m.dimension();
    let p = a.form;
    if p < 0 || p >= n as i64 {
        return Err(Error::OutOfRange { what: "p", value: p, min: 0, max: n as i64 - 1 });
    }
    let mut ok = true;
    let mut verdict = |pass: bool| {
        ok &= pass;
        if pass { "PASS" } else { "FAIL" }
    };
    let mut lines = Vec::new();
    if m.geodesics().is_empty() {
        lines.push("note: empty spectrum, hyperbolic checks are trivial".to_string());
    }
    for &s in &a.s {
        let closed = mellin_hyperbolic(&m, p, s)?;
        let quad = mellin_hyperbolic_quadrature(&m, p, s)?;
        let rel = if quad.value == 0.0 { (closed - quad.value).abs() } else { ((closed - quad.value) / quad.value).abs() };
        lines.push(format!(
            "{} mellin s={s}: bessel {closed:.15e} quadrature {:.15e} rel {rel:.2e}",
            verdict(rel <= MELLIN_REL_TOL),
            quad.value
        ));
    }
    let identity = m.chi_one() * m.volume() * to_f64(&identity_sector_zeta_zero(n, p)?);
    let numeric = identity_zeta_zero_extrapolated(&m, p, 1e-3)?;
    let rel = ((numeric - identity) / identity).abs();
    lines.push(format!(
        "{} identity zeta(0): exact {identity:.15e} continued {numeric:.15e} rel {rel:.2e}",
        verdict(rel <= verify::BRIDGE_REL_TOL)
    ));
    if !m.geodesics().is_empty() {
        let z2 = zeta_hyperbolic(&m, p, 1e-2)?;
        let z3 = zeta_hyperbolic(&m, p, 1e-3)?;
        let ratio = z2 / z3;
        lines.push(format!(
            "{} hyperbolic s->0: zeta_H(1e-2) {z2:.6e} zeta_H(1e-3) {z3:.6e} ratio {ratio:.4}",
            verdict((ratio - 10.0).abs() <= 10.0 * SCALING_RATIO_TOL)
        ));
        lines.push(format!(
            "{} hyperbolic vs identity: |zeta_H(1e-3)| / |zeta_I(0)| = {:.2e}",
            verdict(z3.abs() < SCALING_MAGNITUDE_FACTOR * identity.abs()),
            z3.abs() / identity.abs()
        ));
    }
    for line in lines {
        writeln!(out, "{line}").map_err(io_err)?;
    }
    Ok(if ok { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn cmd_synth(a: SynthArgs, out: &mut dyn Write) -> Result<i32> {
    let spectrum = synth_spectrum(a.seed, a.count, a.min_length, a.max_power, a.dim)?;
    let mut m = ManifoldData::new(a.dim, a.volume, spectrum)?;
    if let Some(b) = a.betti {
        m = m.with_betti(b)?;
    }
    match a.output {
        Some(path) => m.save(&path)?,
        None => write!(out, "{}", m.to_toml_string()).map_err(io_err)?,
    }
    Ok(EXIT_OK)
}

fn cmd_verify(a: VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    let golden = match &a.golden {
        None => Golden::embedded(),
        Some(path) => match Golden::load(path) {
            Ok(g) => g,
            Err(e) => {
                writeln!(out, "FAIL golden-load: {e}").map_err(io_err)?;
                return Ok(EXIT_CHECK_FAILED);
            }
        },
    };
    let results = verify::run_checks(&golden, a.fast);
    let failed = results.iter().filter(|r| !r.passed).count();
    for r in &results {
        let tag = if r.passed { "PASS" } else { "FAIL" };
        writeln!(out, "{tag} {} ({:.2} s): {}", r.name, r.seconds, r.detail).map_err(io_err)?;
    }
    writeln!(out, "{} passed, {failed} failed", results.len() - failed).map_err(io_err)?;
    Ok(if failed == 0 { EXIT_OK } else { EXIT_CHECK_FAILED })
}
