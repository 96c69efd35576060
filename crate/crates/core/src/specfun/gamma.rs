//! Log-gamma, log-beta and the first two polygamma functions for positive
//! real arguments.
//!
//! `log_gamma` keeps relative accuracy near its zeros at 1 and 2 by expanding
//! around 1 with the zeta series, and switches to the Stirling series once the
//! argument reaches 10. Differences of log-gamma at large arguments go through
//! [`log_gamma_ratio`], which avoids subtracting two nearly equal values of
//! size `x ln x`.

use std::sync::OnceLock;

use crate::error::{Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;
const STIRLING_CUTOFF: f64 = 10.0;

/// `B_{2k} / (2k (2k-1))` for k = 1..8.
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

/// Number of `zeta(k) - 1` coefficients used by the expansion around 1.
const ZETA_TERMS: usize = 40;

fn check_positive(what: &'static str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            what,
            value: x,
            expected: "finite and > 0",
        })
    }
}

/// `zeta(k) - 1` for k = 2..ZETA_TERMS+2, by direct summation plus an
/// Euler-Maclaurin tail.
fn zeta_minus_one() -> &'static [f64; ZETA_TERMS] {
    static TABLE: OnceLock<[f64; ZETA_TERMS]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table = [0.0; ZETA_TERMS];
        let cutoff = 40.0_f64;
        for (slot, k) in table.iter_mut().zip(2..) {
            let s = k as f64;
            let tail = cutoff.powf(1.0 - s) / (s - 1.0)
                + 0.5 * cutoff.powf(-s)
                + s * cutoff.powf(-s - 1.0) / 12.0
                - s * (s + 1.0) * (s + 2.0) * cutoff.powf(-s - 3.0) / 720.0
                + s * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0) * cutoff.powf(-s - 5.0)
                    / 30_240.0;
            let head: f64 = (2..40).rev().map(|n| (n as f64).powf(-s)).sum();
            *slot = head + tail;
        }
        table
    })
}

/// ln Γ(1 + z) for |z| <= 0.5.
fn ln_gamma_1p(z: f64) -> f64 {
    let zeta = zeta_minus_one();
    let mut sum = 0.0;
    // power carries (-1)^k z^k
    let mut power = -z;
    for (k, zm1) in (2..).zip(zeta.iter()) {
        power *= -z;
        sum += zm1 * power / k as f64;
    }
    -z.ln_1p() + z * (1.0 - EULER_GAMMA) + sum
}

fn stirling_tail(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut acc = 0.0;
    for c in STIRLING.iter().rev() {
        acc = acc * inv2 + c;
    }
    acc * inv
}

pub(crate) fn ln_gamma_unchecked(x: f64) -> f64 {
    if x >= STIRLING_CUTOFF {
        return (x - 0.5) * x.ln() - x + HALF_LN_2PI + stirling_tail(x);
    }
    if x < 0.5 {
        return ln_gamma_1p(x) - x.ln();
    }
    if x <= 1.5 {
        return ln_gamma_1p(x - 1.0);
    }
    // shift down into (1.5, 2.5], then ln Γ(2+z) = ln(1+z) + ln Γ(1+z)
    let mut y = x;
    let mut prod = 1.0;
    while y > 2.5 {
        y -= 1.0;
        prod *= y;
    }
    let z = y - 2.0;
    prod.ln() + z.ln_1p() + ln_gamma_1p(z)
}

/// ln Γ(x) for x > 0.
pub fn log_gamma(x: f64) -> Result<f64> {
    check_positive("log_gamma", x)?;
    Ok(ln_gamma_unchecked(x))
}

pub(crate) fn ln_gamma_ratio_unchecked(x: f64, d: f64) -> f64 {
    let y = x + d;
    if x >= STIRLING_CUTOFF && y >= STIRLING_CUTOFF {
        (x - 0.5) * (d / x).ln_1p() + d * y.ln() - d + stirling_tail(y) - stirling_tail(x)
    } else {
        ln_gamma_unchecked(y) - ln_gamma_unchecked(x)
    }
}

/// ln Γ(x + d) − ln Γ(x), accurate when `x` is large compared with `d`.
pub fn log_gamma_ratio(x: f64, d: f64) -> Result<f64> {
    check_positive("log_gamma_ratio", x)?;
    check_positive("log_gamma_ratio", x + d)?;
    Ok(ln_gamma_ratio_unchecked(x, d))
}

pub(crate) fn ln_beta_unchecked(a: f64, b: f64) -> f64 {
    let (small, large) = if a <= b { (a, b) } else { (b, a) };
    ln_gamma_unchecked(small) - ln_gamma_ratio_unchecked(large, small)
}

/// ln B(a, b). Symmetric in its arguments bit for bit.
pub fn log_beta(a: f64, b: f64) -> Result<f64> {
    check_positive("log_beta", a)?;
    check_positive("log_beta", b)?;
    Ok(ln_beta_unchecked(a, b))
}

pub(crate) fn digamma_unchecked(x: f64) -> f64 {
    let mut y = x;
    let mut shift = 0.0;
    while y < STIRLING_CUTOFF {
        shift += 1.0 / y;
        y += 1.0;
    }
    let inv2 = 1.0 / (y * y);
    let series = inv2
        * (1.0 / 12.0
            - inv2
                * (1.0 / 120.0
                    - inv2
                        * (1.0 / 252.0
                            - inv2
                                * (1.0 / 240.0
                                    - inv2
                                        * (1.0 / 132.0
                                            - inv2 * (691.0 / 32_760.0 - inv2 / 12.0))))));
    y.ln() - 0.5 / y - series - shift
}

/// ψ(x), the logarithmic derivative of Γ.
pub fn digamma(x: f64) -> Result<f64> {
    check_positive("digamma", x)?;
    Ok(digamma_unchecked(x))
}

pub(crate) fn trigamma_unchecked(x: f64) -> f64 {
    let mut y = x;
    let mut shift = 0.0;
    while y < STIRLING_CUTOFF {
        shift += 1.0 / (y * y);
        y += 1.0;
    }
    let inv = 1.0 / y;
    let inv2 = inv * inv;
    let series = inv2
        * inv
        * (1.0 / 6.0
            - inv2
                * (1.0 / 30.0
                    - inv2
                        * (1.0 / 42.0
                            - inv2
                                * (1.0 / 30.0
                                    - inv2
                                        * (5.0 / 66.0
                                            - inv2 * (691.0 / 2730.0 - inv2 * 7.0 / 6.0))))));
    inv + 0.5 * inv2 + series + shift
}

/// ψ′(x) = Σ_{k≥0} 1/(x+k)².
pub fn trigamma(x: f64) -> Result<f64> {
    check_positive("trigamma", x)?;
    Ok(trigamma_unchecked(x))
}
