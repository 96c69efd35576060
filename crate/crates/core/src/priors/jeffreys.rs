//! Fisher information of the Yule–Simon family and the Jeffreys prior
//!
//! ```text
//! q(α) = (1/(1−α)) √(1 − ₃F₂(1, c+1, 1; c+2, c+2; 1)/(2−α)²),   c = 1/(1−α).
//! ```
//!
//! With a = c + 1 and F = 1 + G the radicand equals (2c + 1 − c²G)/a², which is
//! how it is evaluated, since 1 − F/(2−α)² cancels to O(1−α) as α → 1.

use std::sync::OnceLock;

use super::tail::{survival_real, survival_weighted_tail, Compensated};
use crate::error::{Error, Result};
use crate::specfun::{
    hyp3f2_unit_split, integrate_unit_interval, QuadratureControl, SeriesControl,
};
use crate::yule_simon::check_alpha;

/// Returns (c, radicand) with radicand = I(α)/c².
fn radicand(alpha: f64, ctrl: &SeriesControl) -> Result<(f64, f64)> {
    check_alpha("fisher_information", alpha)?;
    let c = 1.0 / (1.0 - alpha);
    let a = c + 1.0;
    let g = hyp3f2_unit_split(a, a + 1.0, ctrl)?.rest;
    let value = (2.0 * c + 1.0 - c * c * g) / (a * a);
    if value > 0.0 && value.is_finite() {
        Ok((c, value))
    } else {
        Err(Error::Radicand { alpha, value })
    }
}

/// I(α) = c² (1 − ₃F₂/(2−α)²).
pub fn fisher_information(alpha: f64, ctrl: &SeriesControl) -> Result<f64> {
    let (c, rad) = radicand(alpha, ctrl)?;
    Ok(c * c * rad)
}

/// q(α) = √I(α), the unnormalized Jeffreys density.
pub fn jeffreys_unnormalized(alpha: f64) -> Result<f64> {
    jeffreys_unnormalized_with(alpha, &SeriesControl::default())
}

pub fn jeffreys_unnormalized_with(alpha: f64, ctrl: &SeriesControl) -> Result<f64> {
    let (c, rad) = radicand(alpha, ctrl)?;
    Ok(c * rad.sqrt())
}

/// ln q(α).
pub fn ln_jeffreys_unnormalized(alpha: f64, ctrl: &SeriesControl) -> Result<f64> {
    let (c, rad) = radicand(alpha, ctrl)?;
    Ok(c.ln() + 0.5 * rad.ln())
}

/// K = ∫₀¹ q(α) dα.
pub fn jeffreys_normalizer(quad: &QuadratureControl) -> Result<f64> {
    normalizer_with(&SeriesControl::default(), quad)
}

fn normalizer_with(series: &SeriesControl, quad: &QuadratureControl) -> Result<f64> {
    integrate_unit_interval(|a| jeffreys_unnormalized_with(a, series), quad)
}

/// The Jeffreys prior with a lazily computed, cached normalizer.
#[derive(Debug, Clone, Default)]
pub struct JeffreysPrior {
    series: SeriesControl,
    quad: QuadratureControl,
    normalizer: OnceLock<f64>,
}

impl JeffreysPrior {
    pub fn new(series: SeriesControl, quad: QuadratureControl) -> Self {
        Self {
            series,
            quad,
            normalizer: OnceLock::new(),
        }
    }

    pub fn series_control(&self) -> &SeriesControl {
        &self.series
    }

    pub fn normalizer(&self) -> Result<f64> {
        if let Some(&k) = self.normalizer.get() {
            return Ok(k);
        }
        let k = normalizer_with(&self.series, &self.quad)?;
        Ok(*self.normalizer.get_or_init(|| k))
    }

    pub fn unnormalized(&self, alpha: f64) -> Result<f64> {
        jeffreys_unnormalized_with(alpha, &self.series)
    }

    pub fn ln_unnormalized(&self, alpha: f64) -> Result<f64> {
        ln_jeffreys_unnormalized(alpha, &self.series)
    }

    /// Normalized density q(α)/K.
    pub fn density(&self, alpha: f64) -> Result<f64> {
        Ok(self.unnormalized(alpha)? / self.normalizer()?)
    }
}

/// Brute-force evaluation of I(α) = −c² + 2c³ E[H(K)] − c⁴ E[T(K)] with
/// H(k) = Σ_{j≤k} 1/(c+j) and T(k) = Σ_{j≤k} 1/(c+j)².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FisherOracle {
    /// E[H(K)], which should equal 1 − α.
    pub harmonic: f64,
    /// E[T(K)], which should equal ₃F₂/(c+1)².
    pub squares: f64,
    pub fisher: f64,
    /// Estimated error of the summed remainder beyond `k_max`, on the scale
    /// of `fisher`.
    pub truncation_bound: f64,
}

/// Sums the expectations over k ≤ k_max and adds the remainder
/// Σ_{k>K} f(k) H(k) = S(K+1) H(K) + Σ_{j>K} S(j)/(c+j) (and likewise for T).
pub fn fisher_information_oracle(alpha: f64, k_max: u64) -> Result<FisherOracle> {
    check_alpha("fisher_information_oracle", alpha)?;
    if k_max < 1000 {
        return Err(Error::Config(format!(
            "k_max must be at least 1000 (got {k_max})"
        )));
    }
    let c = 1.0 / (1.0 - alpha);
    let mut pmf = c / (c + 1.0);
    let (mut h, mut t) = (0.0, 0.0);
    let (mut eh, mut et) = (Compensated::default(), Compensated::default());
    for k in 1..=k_max {
        let kf = k as f64;
        let x = c + kf;
        h += 1.0 / x;
        t += 1.0 / (x * x);
        eh.add(pmf * h);
        et.add(pmf * t);
        pmf *= kf / (kf + c + 1.0);
    }
    let s_next = survival_real(c, (k_max + 1) as f64);
    let rest_h = survival_weighted_tail(
        c,
        k_max + 1,
        |x| 1.0 / (c + x),
        |x| -1.0 / ((c + x) * (c + x)),
        1e-16,
    )?;
    let rest_t = survival_weighted_tail(
        c,
        k_max + 1,
        |x| 1.0 / ((c + x) * (c + x)),
        |x| -2.0 / (c + x).powi(3),
        1e-18,
    )?;
    eh.add(s_next * h);
    eh.add(rest_h.value);
    et.add(s_next * t);
    et.add(rest_t.value);
    let (harmonic, squares) = (eh.value(), et.value());
    let c2 = c * c;
    Ok(FisherOracle {
        harmonic,
        squares,
        fisher: -c2 + 2.0 * c2 * c * harmonic - c2 * c2 * squares,
        truncation_bound: 2.0 * c2 * c * rest_h.error + c2 * c2 * rest_t.error,
    })
}
