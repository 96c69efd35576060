//! The unit-argument series ₃F₂(1, a, 1; b, b; 1).
//!
//! Terms follow the recurrence `t_{l+1} = t_l (l+1)(a+l) / (b+l)²` with
//! `t_0 = 1`. For the `b = a + 1` family the terms only decay like
//! `l^{-(a+1)}`, which at a ≈ 2 would need ~10⁶ terms for twelve digits. After
//! a short direct prefix of `L` terms we therefore switch to the exact
//! factorial-series rearrangement of the remainder,
//!
//! ```text
//! Σ_{l≥L} t_l = Σ_{m≥0} r_m,   r_0 = t_L (L+a)/a,
//! r_{m+1} = r_m (m+1)(a+m) / ((a+m+1)(L+a+m+1)),
//! ```
//!
//! obtained by expanding `1/(l+a)` as `Σ_m m! Γ(l+a+1)/Γ(l+a+m+2)` and summing
//! over `l` in closed form. Its terms fall off like `m^{-(L+a)}`, so a few
//! dozen suffice. Both phases stop on a rigorous upper bound of the remainder:
//! whenever every later term ratio is at most `(j+1)/(j+1+s)`, the tail after
//! term `m` is at most `term_m (m+1)/(s-1)`.

use super::SeriesControl;
use crate::error::{Error, Result};

/// Length of the direct prefix before switching to the rearranged tail.
const DIRECT_PREFIX: usize = 32;

/// Evaluation of the series split as `1 + rest`, so callers that need
/// `F − 1` do not lose digits to cancellation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hyp3F2 {
    /// Sum of the terms with l ≥ 1.
    pub rest: f64,
    /// Number of terms evaluated across both phases.
    pub terms: usize,
}

impl Hyp3F2 {
    pub fn value(&self) -> f64 {
        1.0 + self.rest
    }
}

/// ₃F₂(1, a, 1; b, b; 1) to relative tolerance `ctrl.rel_tol`.
///
/// Requires `b > a` and `2b − a − 2 > 0` (convergence at unit argument).
pub fn hyp3f2_unit(a: f64, b: f64, ctrl: &SeriesControl) -> Result<f64> {
    hyp3f2_unit_split(a, b, ctrl).map(|h| h.value())
}

pub fn hyp3f2_unit_split(a: f64, b: f64, ctrl: &SeriesControl) -> Result<Hyp3F2> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::Domain {
            what: "hyp3f2_unit",
            value: a,
            expected: "a > 0",
        });
    }
    if !(b > a && b.is_finite()) || 2.0 * b - a - 2.0 <= 0.0 {
        return Err(Error::Domain {
            what: "hyp3f2_unit",
            value: b,
            expected: "b > a and 2b - a - 2 > 0",
        });
    }
    if (b - (a + 1.0)).abs() <= 4.0 * f64::EPSILON * b && a > 1.0 {
        adjacent(a, ctrl)
    } else {
        direct(a, b, ctrl)
    }
}

/// The `b = a + 1` family.
fn adjacent(a: f64, ctrl: &SeriesControl) -> Result<Hyp3F2> {
    let mut term = 1.0;
    let mut rest = 0.0;
    // direct phase: ratio (l+1)(a+l)/(a+1+l)^2 <= (l+1)/(l+1+a)
    for l in 0..DIRECT_PREFIX {
        let lf = l as f64;
        term *= (lf + 1.0) * (a + lf) / ((a + 1.0 + lf) * (a + 1.0 + lf));
        rest += term;
        let bound = term * (lf + 2.0) / (a - 1.0);
        if bound <= ctrl.rel_tol * (1.0 + rest) {
            return Ok(Hyp3F2 { rest, terms: l + 2 });
        }
    }
    // `term` is t_L with L = DIRECT_PREFIX; it moves into the rearranged tail
    rest -= term;
    let big_l = DIRECT_PREFIX as f64;
    let shift = big_l + a;
    let mut r = term * shift / a;
    let mut tail = r;
    for m in 0..ctrl.max_terms {
        let mf = m as f64;
        r *= (mf + 1.0) * (a + mf) / ((a + mf + 1.0) * (shift + mf + 1.0));
        tail += r;
        let bound = r * (mf + 2.0) / (shift - 1.0);
        if bound <= ctrl.rel_tol * (1.0 + rest + tail) {
            return Ok(Hyp3F2 {
                rest: rest + tail,
                terms: DIRECT_PREFIX + m + 2,
            });
        }
    }
    Err(Error::NonConvergence {
        what: "hyp3f2_unit",
        terms: DIRECT_PREFIX + ctrl.max_terms,
        partial: 1.0 + rest + tail,
    })
}

/// General `b`: plain term recurrence with a power-law estimate of the
/// remainder, `t_l (l+b)/(2b-a-2)`.
fn direct(a: f64, b: f64, ctrl: &SeriesControl) -> Result<Hyp3F2> {
    let excess = 2.0 * b - a - 2.0;
    let mut term = 1.0;
    let mut rest = 0.0;
    for l in 0..ctrl.max_terms {
        let lf = l as f64;
        term *= (lf + 1.0) * (a + lf) / ((b + lf) * (b + lf));
        rest += term;
        let estimate = term * (lf + 1.0 + b) / excess;
        if term <= ctrl.rel_tol * (1.0 + rest) && estimate <= ctrl.rel_tol * (1.0 + rest) {
            return Ok(Hyp3F2 { rest, terms: l + 2 });
        }
    }
    Err(Error::NonConvergence {
        what: "hyp3f2_unit",
        terms: ctrl.max_terms,
        partial: 1.0 + rest,
    })
}
