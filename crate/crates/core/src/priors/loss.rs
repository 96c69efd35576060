//! Kullback–Leibler divergence between Yule–Simon members and the loss-based
//! prior on the grid D_M = {i/M : i = 1, …, M−1}.
//!
//! Telescoping ln Γ differences gives
//!
//! ```text
//! ln f(k;α) − ln f(k;α′) = ln(c/c′) + Σ_{j≤k} ln(1 + (c′−c)/(c+j)),
//! ```
//!
//! and taking expectations with Σ_{j≥1} S(j)/(c+j) = 1/c leaves
//!
//! ```text
//! D(α‖α′) = φ((c′−c)/c) − Σ_{j≥1} S(j) φ((c′−c)/(c+j)),   φ(x) = x − ln(1+x),
//! ```
//!
//! where both pieces are second order in c′ − c, so nearby grid points do not
//! cancel to noise.

use rayon::prelude::*;

use super::tail::{survival_weighted_tail, Compensated};
use crate::error::{Error, Result};
use crate::specfun::SeriesControl;
use crate::yule_simon::check_alpha;

const INITIAL_CUTOFF: u64 = 256;

/// x − ln(1 + x) for x > −1.
fn phi(x: f64) -> f64 {
    if x.abs() < 0.1 {
        let mut power = x * x;
        let mut sum = 0.0;
        let mut k = 2.0;
        loop {
            let term = power / k;
            sum += term;
            if term.abs() <= 1e-17 * sum.abs() {
                return sum;
            }
            power *= -x;
            k += 1.0;
        }
    } else {
        x - x.ln_1p()
    }
}

fn kl_with_cutoff(c: f64, d: f64, n: u64, abs_tol: f64) -> Result<f64> {
    let mut acc = Compensated::default();
    let mut s = 1.0;
    for j in 1..n {
        let jf = j as f64;
        acc.add(s * phi(d / (c + jf)));
        s *= jf / (c + jf);
    }
    let tail = survival_weighted_tail(
        c,
        n,
        |x| phi(d / (c + x)),
        |x| {
            let y = d / (c + x);
            -(y / (1.0 + y)) * d / ((c + x) * (c + x))
        },
        abs_tol,
    )?;
    acc.add(tail.value);
    Ok(phi(d / c) - acc.value())
}

/// D_KL(f(·|α) ‖ f(·|α′)).
///
/// The head of the series is summed exactly and the remainder integrated;
/// the cutoff doubles until consecutive estimates agree to `ctrl.rel_tol`.
pub fn kl_divergence(alpha: f64, alpha_prime: f64, ctrl: &SeriesControl) -> Result<f64> {
    check_alpha("kl_divergence", alpha)?;
    check_alpha("kl_divergence", alpha_prime)?;
    let c = 1.0 / (1.0 - alpha);
    let d = 1.0 / (1.0 - alpha_prime) - c;
    let scale = phi(d / c);
    if scale == 0.0 {
        return Ok(0.0);
    }
    let noise = 16.0 * f64::EPSILON * scale;
    let abs_tol = (1e-3 * ctrl.rel_tol * scale).max(f64::MIN_POSITIVE);
    let mut n = INITIAL_CUTOFF;
    let mut previous = kl_with_cutoff(c, d, n, abs_tol)?;
    while (2 * n) as usize <= ctrl.max_terms {
        n *= 2;
        let current = kl_with_cutoff(c, d, n, abs_tol)?;
        if (current - previous).abs() <= ctrl.rel_tol * current.abs() + noise {
            if current < -noise {
                break;
            }
            return Ok(current.max(0.0));
        }
        previous = current;
    }
    Err(Error::NonConvergence {
        what: "kl_divergence",
        terms: n as usize,
        partial: previous,
    })
}

/// A probability vector on D_M.
#[derive(Debug, Clone, PartialEq)]
pub struct GridPrior {
    m: usize,
    support: Vec<f64>,
    masses: Vec<f64>,
}

impl GridPrior {
    /// Validates `masses` (length M − 1, nonnegative, summing to 1) and
    /// attaches the support i/M.
    pub fn new(m: usize, masses: Vec<f64>) -> Result<Self> {
        if m < 3 {
            return Err(Error::Config(format!(
                "grid size M must be at least 3 (got {m})"
            )));
        }
        if masses.len() != m - 1 {
            return Err(Error::Config(format!(
                "expected {} masses for M = {m}, got {}",
                m - 1,
                masses.len()
            )));
        }
        if masses.iter().any(|w| !(*w >= 0.0) || !w.is_finite()) {
            return Err(Error::Config(
                "grid masses must be finite and nonnegative".into(),
            ));
        }
        let total: f64 = masses.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::Config(format!("grid masses sum to {total}, not 1")));
        }
        Ok(Self {
            m,
            support: grid(m),
            masses,
        })
    }

    /// Uniform masses on D_M.
    pub fn uniform(m: usize) -> Result<Self> {
        let w = 1.0 / (m.max(3) - 1) as f64;
        let masses = vec![w; m.saturating_sub(1)];
        Self::new(m, normalize(masses))
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn support(&self) -> &[f64] {
        &self.support
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }
}

fn grid(m: usize) -> Vec<f64> {
    (1..m).map(|i| i as f64 / m as f64).collect()
}

fn normalize(mut w: Vec<f64>) -> Vec<f64> {
    let mut acc = Compensated::default();
    for &x in &w {
        acc.add(x);
    }
    let total = acc.value();
    for x in &mut w {
        *x /= total;
    }
    w
}

/// For each grid point, min over the other grid points of the divergence.
/// Ties go to the smaller α′.
pub fn min_kl_over_grid(m: usize, ctrl: &SeriesControl) -> Result<Vec<f64>> {
    if m < 3 {
        return Err(Error::Config(format!(
            "grid size M must be at least 3 (got {m})"
        )));
    }
    let support = grid(m);
    support
        .par_iter()
        .enumerate()
        .map(|(i, &alpha)| {
            let mut best = f64::INFINITY;
            for (j, &other) in support.iter().enumerate() {
                if j == i {
                    continue;
                }
                let d = kl_divergence(alpha, other, ctrl)?;
                if d < best {
                    best = d;
                }
            }
            Ok(best)
        })
        .collect()
}

/// π(α) ∝ exp{min_{α′≠α} D_KL(α‖α′)} − 1 on D_M.
pub fn loss_based_prior(m: usize, ctrl: &SeriesControl) -> Result<GridPrior> {
    let min_kl = min_kl_over_grid(m, ctrl)?;
    let weights: Vec<f64> = min_kl.iter().map(|d| d.exp_m1()).collect();
    GridPrior::new(m, normalize(weights))
}
