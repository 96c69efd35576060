//! The Yule–Simon distribution parametrized by α ∈ (0, 1):
//!
//! ```text
//! f(k; α) = c B(k, c + 1),   c = ρ = 1/(1 − α),   k = 1, 2, …
//! ```
//!
//! α is the probability that the next observation takes a value not seen
//! before; ρ is the classical shape parameter and is exposed read-only.

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::specfun::{digamma_unchecked, ln_beta_unchecked, trigamma_unchecked};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct YuleSimon {
    alpha: f64,
}

pub(crate) fn check_alpha(what: &'static str, alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain {
            what,
            value: alpha,
            expected: "0 < alpha < 1",
        })
    }
}

fn check_support(what: &'static str, k: u64) -> Result<()> {
    if k >= 1 {
        Ok(())
    } else {
        Err(Error::Domain {
            what,
            value: k as f64,
            expected: "k >= 1",
        })
    }
}

impl YuleSimon {
    pub fn new(alpha: f64) -> Result<Self> {
        check_alpha("YuleSimon::new", alpha)?;
        Ok(Self { alpha })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// ρ = 1/(1 − α) > 1. This is also the `c` of the Fisher-information
    /// algebra.
    pub fn rho(&self) -> f64 {
        1.0 / (1.0 - self.alpha)
    }

    pub fn log_pmf(&self, k: u64) -> Result<f64> {
        check_support("log_pmf", k)?;
        let c = self.rho();
        Ok(c.ln() + ln_beta_unchecked(k as f64, c + 1.0))
    }

    pub fn pmf(&self, k: u64) -> Result<f64> {
        self.log_pmf(k).map(f64::exp)
    }

    /// P(K ≥ j) = Γ(j) Γ(c+1) / Γ(c+j) = c B(j, c).
    pub fn survival(&self, j: u64) -> Result<f64> {
        check_support("survival", j)?;
        if j == 1 {
            return Ok(1.0);
        }
        let c = self.rho();
        Ok((c.ln() + ln_beta_unchecked(j as f64, c)).exp())
    }

    /// E[K] = ρ/(ρ − 1) = 1/α.
    pub fn mean(&self) -> f64 {
        1.0 / self.alpha
    }

    /// Σ count · ln f(k; α) over the sample.
    pub fn log_likelihood(&self, data: &FrequencySample) -> f64 {
        let c = self.rho();
        let ln_c = c.ln();
        data.entries
            .iter()
            .map(|&(k, count)| count as f64 * (ln_c + ln_beta_unchecked(k as f64, c + 1.0)))
            .sum()
    }

    /// ∂²/∂α² ln f(k; α) = c² − 2c³ Σ_{j=1}^{k} 1/(c+j) + c⁴ Σ_{j=1}^{k} 1/(c+j)².
    ///
    /// The two sums are evaluated as polygamma differences.
    pub fn d2_log_pmf(&self, k: u64) -> Result<f64> {
        check_support("d2_log_pmf", k)?;
        let c = self.rho();
        let kf = k as f64;
        let harmonic = digamma_unchecked(c + kf + 1.0) - digamma_unchecked(c + 1.0);
        let squares = trigamma_unchecked(c + 1.0) - trigamma_unchecked(c + kf + 1.0);
        Ok(c * c - 2.0 * c * c * c * harmonic + c.powi(4) * squares)
    }

    /// One draw from the Beta(ρ, 1)–geometric mixture: p = U^{1/ρ}, then
    /// K = ⌈ln(1−V)/ln(1−p)⌉ on {1, 2, …}.
    pub fn draw<R: RngExt + ?Sized>(&self, rng: &mut R) -> u64 {
        let u = 1.0 - rng.random::<f64>();
        let p = u.powf(1.0 - self.alpha);
        let v: f64 = rng.random();
        let k = ((-v).ln_1p() / (-p).ln_1p()).ceil();
        if k >= 1.0 {
            // saturating cast for the (astronomically rare) k beyond u64
            k as u64
        } else {
            1
        }
    }

    pub fn sample_with<R: RngExt + ?Sized>(&self, rng: &mut R, n: usize) -> Vec<u64> {
        (0..n).map(|_| self.draw(rng)).collect()
    }

    /// `n` i.i.d. draws from a ChaCha8 stream seeded with `seed`.
    pub fn sample(&self, n: usize, seed: u64) -> Vec<u64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        self.sample_with(&mut rng, n)
    }
}

pub fn log_pmf(k: u64, alpha: f64) -> Result<f64> {
    YuleSimon::new(alpha)?.log_pmf(k)
}

pub fn survival(j: u64, alpha: f64) -> Result<f64> {
    YuleSimon::new(alpha)?.survival(j)
}

pub fn mean(alpha: f64) -> Result<f64> {
    Ok(YuleSimon::new(alpha)?.mean())
}

pub fn sample(alpha: f64, n: usize, seed: u64) -> Result<Vec<u64>> {
    if n == 0 {
        return Err(Error::Config("sample size must be at least 1".into()));
    }
    Ok(YuleSimon::new(alpha)?.sample(n, seed))
}

pub fn log_likelihood(data: &FrequencySample, alpha: f64) -> Result<f64> {
    Ok(YuleSimon::new(alpha)?.log_likelihood(data))
}

/// Observed values `k` with their multiplicities, kept sorted by `k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FrequencySample {
    entries: Vec<(u64, u64)>,
    n: u64,
}

impl FrequencySample {
    /// Builds a sample from `(k, count)` pairs. Every `k` and `count` must be
    /// at least 1 and the `k` values must be distinct.
    pub fn new(entries: impl IntoIterator<Item = (u64, u64)>) -> Result<Self> {
        let mut entries: Vec<(u64, u64)> = entries.into_iter().collect();
        if entries.is_empty() {
            return Err(Error::InvalidData("frequency sample is empty".into()));
        }
        for &(k, count) in &entries {
            if k == 0 || count == 0 {
                return Err(Error::InvalidData(format!(
                    "entry (k = {k}, count = {count}) must have k >= 1 and count >= 1"
                )));
            }
        }
        entries.sort_unstable();
        if let Some(w) = entries.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidData(format!(
                "value k = {} appears twice",
                w[0].0
            )));
        }
        let n = entries.iter().map(|&(_, c)| c).sum();
        Ok(Self { entries, n })
    }

    /// Like [`new`](Self::new) but merges repeated `k` values by adding
    /// their counts.
    pub fn aggregate(pairs: impl IntoIterator<Item = (u64, u64)>) -> Result<Self> {
        let mut merged = std::collections::BTreeMap::new();
        for (k, count) in pairs {
            *merged.entry(k).or_insert(0u64) += count;
        }
        Self::new(merged)
    }

    /// Tallies raw observations.
    pub fn from_observations(obs: &[u64]) -> Result<Self> {
        Self::aggregate(obs.iter().map(|&k| (k, 1)))
    }

    pub fn entries(&self) -> &[(u64, u64)] {
        &self.entries
    }

    /// Total number of observations, Σ count.
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn mean(&self) -> f64 {
        let total: f64 = self.entries.iter().map(|&(k, c)| k as f64 * c as f64).sum();
        total / self.n as f64
    }
}
