//! Posterior sampling for α.
//!
//! The Jeffreys posterior is explored by a random-walk Metropolis–Hastings
//! chain on x = logit(α), whose target picks up the Jacobian α(1−α). The
//! grid posterior uses an independence sampler with uniform proposals over
//! D_M, and can also be enumerated exactly.

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::priors::{GridPrior, JeffreysPrior};
use crate::yule_simon::{FrequencySample, YuleSimon};

pub const DEFAULT_PROPOSAL_SCALE: f64 = 0.5;

/// Acceptance rates outside this band trigger a tuning warning.
pub const ACCEPTANCE_BAND: (f64, f64) = (0.05, 0.95);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McmcConfig {
    pub iterations: usize,
    pub burn_in: usize,
    pub seed: u64,
    pub proposal_scale: f64,
}

impl McmcConfig {
    pub fn new(iterations: usize, burn_in: usize, seed: u64, proposal_scale: f64) -> Result<Self> {
        if iterations == 0 || burn_in >= iterations {
            return Err(Error::Config(format!(
                "need 0 <= burn_in < iterations (got burn_in = {burn_in}, iterations = {iterations})"
            )));
        }
        if !(proposal_scale > 0.0 && proposal_scale.is_finite()) {
            return Err(Error::Config(format!(
                "proposal scale must be positive (got {proposal_scale})"
            )));
        }
        Ok(Self {
            iterations,
            burn_in,
            seed,
            proposal_scale,
        })
    }

    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }
}

/// Post-burn-in draws of α.
#[derive(Debug, Clone, PartialEq)]
pub struct Chain {
    pub draws: Vec<f64>,
    pub acceptance_rate: f64,
    pub config: McmcConfig,
}

impl Chain {
    /// A message when the acceptance rate suggests retuning the proposal.
    pub fn acceptance_warning(&self) -> Option<String> {
        let (lo, hi) = ACCEPTANCE_BAND;
        if self.acceptance_rate < lo || self.acceptance_rate > hi {
            Some(format!(
                "acceptance rate {:.3} is outside [{lo}, {hi}]; consider changing the proposal scale",
                self.acceptance_rate
            ))
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PosteriorSummary {
    pub mean: f64,
    pub median: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl PosteriorSummary {
    pub fn covers(&self, alpha: f64) -> bool {
        self.ci_low <= alpha && alpha <= self.ci_high
    }
}

/// Method-of-moments start E[K] = 1/α, clipped to [0.05, 0.95].
pub fn initial_alpha(data: &FrequencySample) -> f64 {
    (1.0 / data.mean()).clamp(0.05, 0.95)
}

fn inv_logit(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// Log target on the logit scale, or `None` when α rounds onto the boundary.
fn logit_target(data: &FrequencySample, prior: &JeffreysPrior, alpha: f64) -> Result<Option<f64>> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Ok(None);
    }
    let ll = YuleSimon::new(alpha)?.log_likelihood(data);
    Ok(Some(
        ll + prior.ln_unnormalized(alpha)? + alpha.ln() + (-alpha).ln_1p(),
    ))
}

pub fn sample_posterior_continuous(
    data: &FrequencySample,
    prior: &JeffreysPrior,
    cfg: &McmcConfig,
) -> Result<Chain> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut alpha = initial_alpha(data);
    let mut x = (alpha / (1.0 - alpha)).ln();
    let mut current = logit_target(data, prior, alpha)?.ok_or(Error::Domain {
        what: "sample_posterior_continuous",
        value: alpha,
        expected: "initial value inside (0, 1)",
    })?;
    let mut accepted = 0usize;
    let mut draws = Vec::with_capacity(cfg.iterations - cfg.burn_in);
    for it in 0..cfg.iterations {
        let step: f64 = rng.sample(StandardNormal);
        let x_new = x + cfg.proposal_scale * step;
        let alpha_new = inv_logit(x_new);
        let log_u = rng.random::<f64>().ln();
        if let Some(proposed) = logit_target(data, prior, alpha_new)? {
            if log_u < proposed - current {
                x = x_new;
                alpha = alpha_new;
                current = proposed;
                accepted += 1;
            }
        }
        if it >= cfg.burn_in {
            draws.push(alpha);
        }
    }
    Ok(Chain {
        draws,
        acceptance_rate: accepted as f64 / cfg.iterations as f64,
        config: *cfg,
    })
}

/// ln(mass) + log-likelihood at each grid point.
fn grid_log_weights(data: &FrequencySample, prior: &GridPrior) -> Result<Vec<f64>> {
    prior
        .support()
        .iter()
        .zip(prior.masses())
        .map(|(&a, &w)| Ok(w.ln() + YuleSimon::new(a)?.log_likelihood(data)))
        .collect()
}

pub fn sample_posterior_discrete(
    data: &FrequencySample,
    prior: &GridPrior,
    cfg: &McmcConfig,
) -> Result<Chain> {
    let weights = grid_log_weights(data, prior)?;
    let support = prior.support();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let start = initial_alpha(data);
    let mut i = nearest_index(support, start);
    let mut accepted = 0usize;
    let mut draws = Vec::with_capacity(cfg.iterations - cfg.burn_in);
    for it in 0..cfg.iterations {
        let j = rng.random_range(0..support.len());
        let log_u = rng.random::<f64>().ln();
        if log_u < weights[j] - weights[i] {
            i = j;
            accepted += 1;
        }
        if it >= cfg.burn_in {
            draws.push(support[i]);
        }
    }
    Ok(Chain {
        draws,
        acceptance_rate: accepted as f64 / cfg.iterations as f64,
        config: *cfg,
    })
}

fn nearest_index(support: &[f64], target: f64) -> usize {
    let mut best = 0;
    for (i, &a) in support.iter().enumerate() {
        if (a - target).abs() < (support[best] - target).abs() {
            best = i;
        }
    }
    best
}

/// Posterior masses on the grid by direct normalization.
pub fn exact_grid_posterior(data: &FrequencySample, prior: &GridPrior) -> Result<GridPrior> {
    let weights = grid_log_weights(data, prior)?;
    let top = weights.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let scaled: Vec<f64> = weights.iter().map(|w| (w - top).exp()).collect();
    let total: f64 = scaled.iter().sum();
    GridPrior::new(prior.m(), scaled.into_iter().map(|w| w / total).collect())
}

/// Type-7 sample quantile of sorted data.
fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

pub fn summarize(chain: &Chain) -> Result<PosteriorSummary> {
    summarize_draws(&chain.draws)
}

/// Mean, median and the 0.025/0.975 quantiles.
pub fn summarize_draws(draws: &[f64]) -> Result<PosteriorSummary> {
    if draws.is_empty() {
        return Err(Error::EmptyChain);
    }
    let mut sorted = draws.to_vec();
    sorted.sort_by(f64::total_cmp);
    let shift = draws[0];
    let mean = shift + draws.iter().map(|x| x - shift).sum::<f64>() / draws.len() as f64;
    Ok(PosteriorSummary {
        mean,
        median: quantile_sorted(&sorted, 0.5),
        ci_low: quantile_sorted(&sorted, 0.025),
        ci_high: quantile_sorted(&sorted, 0.975),
    })
}
