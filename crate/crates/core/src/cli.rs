//! The `ys` command line.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 data error,
//! 3 numerical failure.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::data::{
    discretize_returns, embedded, ingest_prices, load_count_table, to_returns,
    write_frequency_sample, CountMode, DEFAULT_DECIMALS,
};
use crate::error::{Error, Result};
use crate::experiments::{
    run_coverage_study, run_fixed_sample_study, Prior, PriorSpec, StudyConfig,
};
use crate::inference::{
    sample_posterior_continuous, sample_posterior_discrete, summarize, Chain, McmcConfig,
    DEFAULT_PROPOSAL_SCALE,
};
use crate::priors::{loss_based_prior, JeffreysPrior};
use crate::specfun::SeriesControl;
use crate::yule_simon::{self, FrequencySample};

#[derive(Debug, Parser)]
#[command(
    name = "ys",
    version,
    about = "Objective Bayesian inference for the Yule–Simon distribution"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PriorKind {
    Jeffreys,
    Loss,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Mode {
    Hits,
    Surnames,
    Returns,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tabulate a prior: Jeffreys density on a uniform grid or loss-based masses on D_M.
    Prior {
        #[arg(long, value_enum)]
        kind: PriorKind,
        #[arg(long, default_value_t = 10)]
        m: usize,
        /// Number of interior points for the Jeffreys tabulation.
        #[arg(long, default_value_t = 99)]
        grid_points: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample the posterior of α for a dataset.
    Fit {
        /// Embedded dataset name (`hits`) or a CSV path.
        #[arg(long)]
        data: String,
        /// How to read the data. Files default to `hits` (`k,count`); the
        /// embedded `hits` table defaults to `surnames`, one observation per row.
        #[arg(long, value_enum)]
        mode: Option<Mode>,
        #[arg(long, value_enum)]
        prior: PriorKind,
        #[arg(long, default_value_t = 10)]
        m: usize,
        #[arg(long, default_value_t = 25_000)]
        iters: usize,
        #[arg(long, default_value_t = 5_000)]
        burnin: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_PROPOSAL_SCALE)]
        proposal_scale: f64,
        /// Decimal places kept when discretizing returns.
        #[arg(long, default_value_t = DEFAULT_DECIMALS)]
        decimals: u32,
        #[arg(long)]
        out_summary: Option<PathBuf>,
        #[arg(long)]
        out_chain: Option<PathBuf>,
    },
    /// Coverage and relative RMSE over a grid of true α.
    Simulate {
        #[arg(long, value_enum)]
        prior: PriorKind,
        #[arg(long, default_value_t = 10)]
        m: usize,
        #[arg(long, default_value_t = 100)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        reps: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 10_000)]
        iters: usize,
        #[arg(long, default_value_t = 2_000)]
        burnin: usize,
        #[arg(long, default_value_t = DEFAULT_PROPOSAL_SCALE)]
        proposal_scale: f64,
        /// Worker threads (0 = all cores).
        #[arg(long, default_value_t = 0)]
        workers: usize,
        /// Comma-separated true values; defaults to the grid i/M.
        #[arg(long, value_delimiter = ',')]
        alphas: Option<Vec<f64>>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// One simulated dataset fitted under the Jeffreys and M = 10, 20 loss-based priors.
    FixedSample {
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 100)]
        n: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw from the Yule–Simon distribution.
    Sample {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Turn a `date,adj_close` price file into a `k,count` table.
    TransformReturns {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = DEFAULT_DECIMALS)]
        decimals: u32,
    },
}

#[derive(Serialize)]
struct SummaryJson {
    prior: String,
    mean: f64,
    median: f64,
    ci_low: f64,
    ci_high: f64,
    acceptance_rate: f64,
    iterations: usize,
    burn_in: usize,
    seed: u64,
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    if e.is_data_error() {
        2
    } else if e.is_numerical() {
        3
    } else {
        1
    }
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|source| {
            Error::Io {
                path: p.to_path_buf(),
                source,
            }
        })?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_all(path: Option<&Path>, body: &str) -> Result<()> {
    let mut out = output(path)?;
    let io_err = |source| Error::Io {
        path: path.map_or_else(|| PathBuf::from("<stdout>"), Path::to_path_buf),
        source,
    };
    out.write_all(body.as_bytes()).map_err(io_err)?;
    out.flush().map_err(io_err)
}

fn prior_spec(kind: PriorKind, m: usize) -> PriorSpec {
    match kind {
        PriorKind::Jeffreys => PriorSpec::Jeffreys,
        PriorKind::Loss => PriorSpec::LossBased(m),
    }
}

fn check_alpha_flag(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::Config(format!(
            "--alpha must lie in (0, 1) (got {alpha})"
        )))
    }
}

fn load_data(data: &str, mode: Option<Mode>, decimals: u32) -> Result<FrequencySample> {
    let count_mode = match mode {
        Some(Mode::Hits) => Some(CountMode::Hits),
        None | Some(Mode::Surnames) => Some(CountMode::Surnames),
        Some(Mode::Returns) => None,
    };
    if let Some(sample) = count_mode.and_then(|m| embedded(data, m)) {
        return Ok(sample);
    }
    let path = Path::new(data);
    match mode.unwrap_or(Mode::Hits) {
        Mode::Hits => load_count_table(path, CountMode::Hits),
        Mode::Surnames => load_count_table(path, CountMode::Surnames),
        Mode::Returns => discretize_returns(&to_returns(&ingest_prices(path)?)?, decimals),
    }
}

fn chain_csv(chain: &Chain) -> String {
    let mut s = String::from("draw\n");
    for d in &chain.draws {
        s.push_str(&format!("{d:.16e}\n"));
    }
    s
}

fn execute(command: Command) -> Result<()> {
    match command {
        Command::Prior {
            kind,
            m,
            grid_points,
            out,
        } => {
            let mut body = String::new();
            match kind {
                PriorKind::Jeffreys => {
                    if grid_points == 0 {
                        return Err(Error::Config("--grid-points must be at least 1".into()));
                    }
                    let prior = JeffreysPrior::default();
                    body.push_str("alpha,density,unnormalized\n");
                    for i in 1..=grid_points {
                        let a = i as f64 / (grid_points + 1) as f64;
                        let q = prior.unnormalized(a)?;
                        body.push_str(&format!("{a},{},{q}\n", q / prior.normalizer()?));
                    }
                }
                PriorKind::Loss => {
                    let prior = loss_based_prior(m, &SeriesControl::default())?;
                    body.push_str("alpha,mass\n");
                    for (a, w) in prior.support().iter().zip(prior.masses()) {
                        body.push_str(&format!("{a},{w}\n"));
                    }
                }
            }
            write_all(out.as_deref(), &body)
        }
        Command::Fit {
            data,
            mode,
            prior,
            m,
            iters,
            burnin,
            seed,
            proposal_scale,
            decimals,
            out_summary,
            out_chain,
        } => {
            let sample = load_data(&data, mode, decimals)?;
            let cfg = McmcConfig::new(iters, burnin, seed, proposal_scale)?;
            let spec = prior_spec(prior, m);
            let chain = match Prior::build(spec)? {
                Prior::Jeffreys(p) => sample_posterior_continuous(&sample, &p, &cfg)?,
                Prior::Grid(p) => sample_posterior_discrete(&sample, &p, &cfg)?,
            };
            if let Some(w) = chain.acceptance_warning() {
                eprintln!("warning: {w}");
            }
            let s = summarize(&chain)?;
            let json = SummaryJson {
                prior: spec.label(),
                mean: s.mean,
                median: s.median,
                ci_low: s.ci_low,
                ci_high: s.ci_high,
                acceptance_rate: chain.acceptance_rate,
                iterations: iters,
                burn_in: burnin,
                seed,
            };
            let text = serde_json::to_string_pretty(&json)
                .map_err(|e| Error::Config(format!("cannot serialize summary: {e}")))?;
            write_all(out_summary.as_deref(), &(text + "\n"))?;
            if let Some(path) = out_chain {
                write_all(Some(&path), &chain_csv(&chain))?;
            }
            Ok(())
        }
        Command::Simulate {
            prior,
            m,
            n,
            reps,
            seed,
            iters,
            burnin,
            proposal_scale,
            workers,
            alphas,
            out,
        } => {
            if m < 3 {
                return Err(Error::Config(format!("--m must be at least 3 (got {m})")));
            }
            let spec = prior_spec(prior, m);
            let alphas = alphas.unwrap_or_else(|| (1..m).map(|i| i as f64 / m as f64).collect());
            let cfg = StudyConfig {
                alphas,
                n,
                replicates: reps,
                mcmc: McmcConfig::new(iters, burnin, seed, proposal_scale)?,
                prior: spec,
                master_seed: seed,
                workers,
            };
            let result = run_coverage_study(&cfg)?;
            let mut body = String::from("alpha,coverage,rel_rmse_mean,rel_rmse_median,failures\n");
            for r in &result.rows {
                body.push_str(&format!(
                    "{},{},{},{},{}\n",
                    r.alpha, r.coverage, r.rel_rmse_mean, r.rel_rmse_median, r.failures
                ));
            }
            write_all(out.as_deref(), &body)
        }
        Command::FixedSample {
            alpha,
            n,
            seed,
            out,
        } => {
            check_alpha_flag(alpha)?;
            let study = run_fixed_sample_study(alpha, n, seed)?;
            let mut body = String::from("prior,mean,median,ci_low,ci_high\n");
            for (spec, s) in &study.fits {
                body.push_str(&format!(
                    "{},{},{},{},{}\n",
                    spec.label(),
                    s.mean,
                    s.median,
                    s.ci_low,
                    s.ci_high
                ));
            }
            write_all(out.as_deref(), &body)
        }
        Command::Sample {
            alpha,
            n,
            seed,
            out,
        } => {
            check_alpha_flag(alpha)?;
            let draws = yule_simon::sample(alpha, n, seed)?;
            let mut body = String::with_capacity(8 * n + 2);
            body.push_str("k\n");
            for k in draws {
                body.push_str(&format!("{k}\n"));
            }
            write_all(out.as_deref(), &body)
        }
        Command::TransformReturns {
            input,
            out,
            decimals,
        } => {
            let sample = discretize_returns(&to_returns(&ingest_prices(&input)?)?, decimals)?;
            write_frequency_sample(&out, &sample)
        }
    }
}
