//! Frequentist validation of the posteriors: coverage and relative RMSE over
//! a grid of true α, and single-sample case studies.
//!
//! Every replicate draws its data and its chain from ChaCha8 streams derived
//! from the master seed and the (α index, replicate) pair, so results do not
//! depend on how the work is scheduled.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::inference::{
    sample_posterior_continuous, sample_posterior_discrete, summarize, McmcConfig,
    PosteriorSummary, DEFAULT_PROPOSAL_SCALE,
};
use crate::priors::{loss_based_prior, GridPrior, JeffreysPrior};
use crate::specfun::SeriesControl;
use crate::yule_simon::{check_alpha, FrequencySample, YuleSimon};

/// Which objective prior to fit with.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PriorSpec {
    Jeffreys,
    LossBased(usize),
}

impl PriorSpec {
    pub fn label(&self) -> String {
        match self {
            PriorSpec::Jeffreys => "jeffreys".to_string(),
            PriorSpec::LossBased(m) => format!("loss-based(M={m})"),
        }
    }

    /// The grid D_M for a loss-based prior; `None` for Jeffreys.
    pub fn default_alphas(&self) -> Option<Vec<f64>> {
        match *self {
            PriorSpec::Jeffreys => None,
            PriorSpec::LossBased(m) => Some((1..m).map(|i| i as f64 / m as f64).collect()),
        }
    }
}

/// A prior ready for sampling.
#[derive(Debug, Clone)]
pub enum Prior {
    Jeffreys(JeffreysPrior),
    Grid(GridPrior),
}

impl Prior {
    pub fn build(spec: PriorSpec) -> Result<Self> {
        Ok(match spec {
            PriorSpec::Jeffreys => Prior::Jeffreys(JeffreysPrior::default()),
            PriorSpec::LossBased(m) => Prior::Grid(loss_based_prior(m, &SeriesControl::default())?),
        })
    }

    pub fn fit(&self, data: &FrequencySample, cfg: &McmcConfig) -> Result<PosteriorSummary> {
        let chain = match self {
            Prior::Jeffreys(p) => sample_posterior_continuous(data, p, cfg)?,
            Prior::Grid(p) => sample_posterior_discrete(data, p, cfg)?,
        };
        summarize(&chain)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Purpose {
    Data = 0,
    Chain = 1,
}

/// Seed for stream (α index, replicate, purpose) of `master`.
fn derive_seed(master: u64, alpha_index: usize, replicate: usize, purpose: Purpose) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    let stream = ((alpha_index as u64) << 40) | ((replicate as u64) << 8) | purpose as u64;
    rng.set_stream(stream);
    rng.next_u64()
}

#[derive(Debug, Clone, PartialEq)]
pub struct StudyConfig {
    pub alphas: Vec<f64>,
    pub n: usize,
    pub replicates: usize,
    /// Iterations, burn-in and proposal scale; the seed is replaced per replicate.
    pub mcmc: McmcConfig,
    pub prior: PriorSpec,
    pub master_seed: u64,
    /// Worker threads; 0 uses all available cores.
    pub workers: usize,
}

impl StudyConfig {
    pub fn validate(&self) -> Result<()> {
        if self.alphas.is_empty() {
            return Err(Error::Config("study needs at least one alpha".into()));
        }
        for &a in &self.alphas {
            check_alpha("StudyConfig::alphas", a)?;
        }
        if self.replicates == 0 || self.n == 0 {
            return Err(Error::Config("replicates and n must be at least 1".into()));
        }
        McmcConfig::new(
            self.mcmc.iterations,
            self.mcmc.burn_in,
            self.mcmc.seed,
            self.mcmc.proposal_scale,
        )?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StudyRow {
    pub alpha: f64,
    /// Fraction of successful replicates whose 95% interval contains α.
    pub coverage: f64,
    /// √MSE/α of the posterior mean.
    pub rel_rmse_mean: f64,
    /// √MSE/α of the posterior median.
    pub rel_rmse_median: f64,
    pub failures: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StudyResult {
    pub prior: PriorSpec,
    pub rows: Vec<StudyRow>,
}

fn pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))
}

pub fn run_coverage_study(cfg: &StudyConfig) -> Result<StudyResult> {
    cfg.validate()?;
    let prior = Prior::build(cfg.prior)?;
    let tasks: Vec<(usize, usize)> = (0..cfg.alphas.len())
        .flat_map(|i| (0..cfg.replicates).map(move |r| (i, r)))
        .collect();
    let fits: Vec<Result<PosteriorSummary>> = pool(cfg.workers)?.install(|| {
        tasks
            .par_iter()
            .map(|&(i, r)| {
                let alpha = cfg.alphas[i];
                let draws = YuleSimon::new(alpha)?
                    .sample(cfg.n, derive_seed(cfg.master_seed, i, r, Purpose::Data));
                let data = FrequencySample::from_observations(&draws)?;
                let mcmc = cfg
                    .mcmc
                    .with_seed(derive_seed(cfg.master_seed, i, r, Purpose::Chain));
                prior.fit(&data, &mcmc)
            })
            .collect()
    });
    let rows = cfg
        .alphas
        .iter()
        .zip(fits.chunks(cfg.replicates))
        .map(|(&alpha, chunk)| aggregate(alpha, chunk))
        .collect();
    Ok(StudyResult {
        prior: cfg.prior,
        rows,
    })
}

fn aggregate(alpha: f64, fits: &[Result<PosteriorSummary>]) -> StudyRow {
    let ok: Vec<&PosteriorSummary> = fits.iter().filter_map(|f| f.as_ref().ok()).collect();
    let count = ok.len() as f64;
    let covered = ok.iter().filter(|s| s.covers(alpha)).count() as f64;
    let rel_rmse = |pick: fn(&PosteriorSummary) -> f64| {
        let mse = ok.iter().map(|s| (pick(s) - alpha).powi(2)).sum::<f64>() / count;
        mse.sqrt() / alpha
    };
    StudyRow {
        alpha,
        coverage: covered / count,
        rel_rmse_mean: rel_rmse(|s| s.mean),
        rel_rmse_median: rel_rmse(|s| s.median),
        failures: fits.len() - ok.len(),
    }
}

/// One dataset fitted under each prior.
#[derive(Debug, Clone, PartialEq)]
pub struct FixedSampleStudy {
    pub alpha: f64,
    pub n: usize,
    pub seed: u64,
    pub data: FrequencySample,
    pub fits: Vec<(PriorSpec, PosteriorSummary)>,
}

pub const FIXED_SAMPLE_PRIORS: [PriorSpec; 3] = [
    PriorSpec::Jeffreys,
    PriorSpec::LossBased(10),
    PriorSpec::LossBased(20),
];

/// Draws n observations at `alpha_true` and fits the Jeffreys and the M = 10
/// and M = 20 loss-based posteriors with 10 000 iterations and 2 000 burn-in.
pub fn run_fixed_sample_study(alpha_true: f64, n: usize, seed: u64) -> Result<FixedSampleStudy> {
    check_alpha("run_fixed_sample_study", alpha_true)?;
    if n == 0 {
        return Err(Error::Config("sample size must be at least 1".into()));
    }
    let draws = YuleSimon::new(alpha_true)?.sample(n, derive_seed(seed, 0, 0, Purpose::Data));
    let data = FrequencySample::from_observations(&draws)?;
    let base = McmcConfig::new(10_000, 2_000, 0, DEFAULT_PROPOSAL_SCALE)?;
    let fits = FIXED_SAMPLE_PRIORS
        .iter()
        .enumerate()
        .map(|(i, &spec)| {
            let mcmc = base.with_seed(derive_seed(seed, i, 0, Purpose::Chain));
            Ok((spec, Prior::build(spec)?.fit(&data, &mcmc)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FixedSampleStudy {
        alpha: alpha_true,
        n,
        seed,
        data,
        fits,
    })
}
