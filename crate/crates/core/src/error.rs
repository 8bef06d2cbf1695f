use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("odd dimensions out of scope (got n = {0})")]
    OddDimension(i64),

    #[error("dimension must be at least 2 (got n = {0})")]
    DimensionTooSmall(i64),

    #[error("form order must be < n/2 (got p = {p} for n = {n})")]
    MiddleDegree { n: u32, p: i64 },

    #[error("index out of range: {what} = {value}, allowed {min}..={max}")]
    OutOfRange {
        what: &'static str,
        value: i64,
        min: i64,
        max: i64,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("cannot add pi-values with different exponents (pi^-{0} and pi^-{1})")]
    PiExponentMismatch(u32, u32),

    #[error("quadrature did not converge: estimate {value:e}, achieved error {error:e} (target {target:e})")]
    Quadrature { value: f64, error: f64, target: f64 },

    #[error("manifold has no Betti numbers; co-exact trace needs b_0..b_{0}")]
    MissingBetti(usize),

    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },

    #[error("invalid manifold: {0}")]
    Manifold(String),

    #[error("io error on {path}: {message}")]
    Io { path: PathBuf, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
