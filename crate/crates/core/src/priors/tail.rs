//! Remainders of survival-weighted series Σ_{j ≥ n} S(j) g(j), where
//! S(x) = c B(x, c) is the Yule–Simon survival function continued to real x.
//!
//! The remainder is replaced by the midpoint Euler–Maclaurin form
//!
//! ```text
//! Σ_{j≥n} h(j) = ∫_{n−½}^∞ h(x) dx + h′(n−½)/24 + O(h‴),
//! ```
//!
//! with the integral mapped onto (0, 1] by x = m/t.

use crate::error::Result;
use crate::specfun::{digamma_unchecked, integrate, ln_beta_unchecked, QuadratureControl};

/// Survival function P(K ≥ x) continued to real x ≥ 1.
pub(crate) fn survival_real(c: f64, x: f64) -> f64 {
    (c.ln() + ln_beta_unchecked(x, c)).exp()
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct TailSum {
    pub value: f64,
    pub error: f64,
}

/// Σ_{j ≥ n} S(j) g(j) for smooth, eventually monotone `g` with derivative
/// `dg`, to absolute tolerance `abs_tol`.
pub(crate) fn survival_weighted_tail<G, D>(
    c: f64,
    n: u64,
    g: G,
    dg: D,
    abs_tol: f64,
) -> Result<TailSum>
where
    G: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let m = n as f64 - 0.5;
    let h = |x: f64| survival_real(c, x) * g(x);
    let ctrl = QuadratureControl {
        abs_tol,
        max_subdivisions: 4000,
    };
    let integral = integrate(
        |t: f64| {
            if t <= 0.0 {
                return Ok(0.0);
            }
            let x = m / t;
            Ok(h(x) * m / (t * t))
        },
        0.0,
        1.0,
        &ctrl,
    )?;
    let s = survival_real(c, m);
    let dh = s * ((digamma_unchecked(m) - digamma_unchecked(m + c)) * g(m) + dg(m));
    let correction = dh / 24.0;
    Ok(TailSum {
        value: integral.value + correction,
        error: integral.error + correction.abs() / m,
    })
}

/// Neumaier compensated summation.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Compensated {
    sum: f64,
    carry: f64,
}

impl Compensated {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}
