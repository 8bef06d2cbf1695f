//! Exact conformal anomalies of p-form fields on compact hyperbolic
//! manifolds, with heat-kernel and zeta-function numerics to check them.

pub mod anomaly;
pub mod bessel;
pub mod cli;
pub mod error;
pub mod exact_arith;
pub mod heat_zeta;
pub mod manifold;
pub mod plancherel;
pub mod quadrature;
pub mod report;
pub mod verify;

pub use error::{Error, Result};
