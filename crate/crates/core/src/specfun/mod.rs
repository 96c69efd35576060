//! Special functions and quadrature used by the distribution and the priors.
//!
//! Everything here is a pure function of its arguments. Failures (domain
//! violations, exhausted series budgets, unmet quadrature tolerances) come
//! back as [`Error`](crate::Error) values rather than NaN.

mod gamma;
mod hypergeometric;
mod quadrature;

pub use gamma::{digamma, log_beta, log_gamma, log_gamma_ratio, trigamma};
pub use hypergeometric::{hyp3f2_unit, hyp3f2_unit_split, Hyp3F2};
pub use quadrature::{
    integrate, integrate_unit_interval, integrate_unit_interval_estimate, Estimate, ENDPOINT_WIDTH,
};

pub(crate) use gamma::{digamma_unchecked, ln_beta_unchecked, trigamma_unchecked};

use crate::error::{Error, Result};

/// Stopping rule for infinite series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesControl {
    pub rel_tol: f64,
    pub max_terms: usize,
}

impl SeriesControl {
    pub fn new(rel_tol: f64, max_terms: usize) -> Result<Self> {
        if !(rel_tol > 0.0) || max_terms == 0 {
            return Err(Error::Config(format!(
                "series control needs rel_tol > 0 and max_terms >= 1 (got {rel_tol}, {max_terms})"
            )));
        }
        Ok(Self { rel_tol, max_terms })
    }
}

impl Default for SeriesControl {
    fn default() -> Self {
        Self {
            rel_tol: 1e-12,
            max_terms: 10_000_000,
        }
    }
}

/// Stopping rule for adaptive quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureControl {
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl QuadratureControl {
    pub fn new(abs_tol: f64, max_subdivisions: usize) -> Result<Self> {
        if !(abs_tol > 0.0) || max_subdivisions == 0 {
            return Err(Error::Config(format!(
                "quadrature control needs abs_tol > 0 and max_subdivisions >= 1 (got {abs_tol}, {max_subdivisions})"
            )));
        }
        Ok(Self {
            abs_tol,
            max_subdivisions,
        })
    }
}

impl Default for QuadratureControl {
    fn default() -> Self {
        Self {
            abs_tol: 1e-9,
            max_subdivisions: 2000,
        }
    }
}
