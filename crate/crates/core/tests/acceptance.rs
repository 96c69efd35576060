//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

use std::path::Path;
use std::process::Command;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use ys_core::data::{embedded, CountMode};
use ys_core::inference::{exact_grid_posterior, sample_posterior_discrete, McmcConfig};
use ys_core::priors::{
    fisher_information, fisher_information_oracle, jeffreys_normalizer, jeffreys_unnormalized,
    loss_based_prior,
};
use ys_core::specfun::{QuadratureControl, SeriesControl};
use ys_core::YuleSimon;

/// Seed for the music-hits fits.
const HITS_SEED: u64 = 1;
/// Master seed for the coverage studies.
const STUDY_SEED: u64 = 20_190_401;
/// Seed for the two fixed-sample studies.
const FIXED_SEED: u64 = 2;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn ys(args: &[&str]) -> Result<(), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_ys"))
        .args(args)
        .output()
        .map_err(|e| format!("cannot run ys: {e}"))?;
    if out.status.success() {
        Ok(())
    } else {
        Err(format!(
            "ys {} exited with {:?}: {}",
            args.join(" "),
            out.status.code(),
            String::from_utf8_lossy(&out.stderr)
        ))
    }
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap_or_default()
}

fn csv_rows(path: &Path) -> Vec<Vec<String>> {
    read(path)
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn within(x: f64, lo: f64, hi: f64) -> bool {
    (lo..=hi).contains(&x)
}

/// Runs the music-hits fits and returns the output files for the determinism check.
fn hits_fits(dir: &Path, tag: &str) -> Result<Vec<(String, serde_json::Value)>, String> {
    let seed = HITS_SEED.to_string();
    let mut out = Vec::new();
    for (name, prior) in [
        ("jeffreys", vec!["--prior", "jeffreys"]),
        ("m10", vec!["--prior", "loss", "--m", "10"]),
        ("m20", vec!["--prior", "loss", "--m", "20"]),
        ("m100", vec!["--prior", "loss", "--m", "100"]),
    ] {
        let summary = dir.join(format!("{tag}-{name}.json"));
        let chain = dir.join(format!("{tag}-{name}-chain.csv"));
        let mut args = vec!["fit", "--data", "hits"];
        args.extend(prior);
        args.extend([
            "--iters",
            "25000",
            "--burnin",
            "5000",
            "--seed",
            &seed,
            "--out-summary",
            summary.to_str().unwrap(),
            "--out-chain",
            chain.to_str().unwrap(),
        ]);
        ys(&args)?;
        let json: serde_json::Value =
            serde_json::from_str(&read(&summary)).map_err(|e| e.to_string())?;
        out.push((name.to_string(), json));
    }
    Ok(out)
}

fn criterion_1(dir: &Path) -> Outcome {
    let start = Instant::now();
    let fits = match hits_fits(dir, "a") {
        Ok(f) => f,
        Err(e) => return outcome(false, e),
    };
    let get = |name: &str, key: &str| {
        fits.iter()
            .find(|(n, _)| n == name)
            .and_then(|(_, j)| j[key].as_f64())
            .unwrap_or(f64::NAN)
    };
    let checks = [
        within(get("jeffreys", "mean"), 0.06, 0.10),
        within(get("jeffreys", "median"), 0.05, 0.09),
        (get("jeffreys", "ci_low") - 0.004).abs() <= 0.04,
        (get("jeffreys", "ci_high") - 0.24).abs() <= 0.04,
        within(get("m10", "mean"), 0.10, 0.16),
        within(get("m20", "mean"), 0.08, 0.14),
        within(get("m100", "median"), 0.05, 0.11),
        start.elapsed().as_secs_f64() < 120.0,
    ];
    outcome(
        checks.iter().all(|&c| c),
        format!(
            "jeffreys mean {:.4} median {:.4} ci ({:.4}, {:.4}); M=10 mean {:.4}; M=20 mean {:.4}; M=100 median {:.4}; {:.1}s",
            get("jeffreys", "mean"),
            get("jeffreys", "median"),
            get("jeffreys", "ci_low"),
            get("jeffreys", "ci_high"),
            get("m10", "mean"),
            get("m20", "mean"),
            get("m100", "median"),
            start.elapsed().as_secs_f64()
        ),
    )
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    // (a) truncated E[Σ_{j≤K} 1/(c+j)] plus the lower tail estimate S(N+1) H(N)
    let mut worst_a: f64 = 0.0;
    for alpha in [0.2, 0.5, 0.8] {
        let ys = YuleSimon::new(alpha).unwrap();
        let c = ys.rho();
        let n = 1_000_000u64;
        let (mut h, mut acc) = (0.0, 0.0);
        for k in 1..=n {
            h += 1.0 / (c + k as f64);
            acc += ys.pmf(k).unwrap() * h;
        }
        acc += ys.survival(n + 1).unwrap() * h;
        worst_a = worst_a.max((acc - (1.0 - alpha)).abs());
    }
    // (b) survival(j) against 1 − Σ_{k<j} pmf(k)
    let mut worst_b: f64 = 0.0;
    for alpha in [0.1, 0.3, 0.5, 0.7, 0.9] {
        let ys = YuleSimon::new(alpha).unwrap();
        let mut cdf = 0.0;
        for j in 1..=50u64 {
            worst_b = worst_b.max((ys.survival(j).unwrap() - (1.0 - cdf)).abs());
            cdf += ys.pmf(j).unwrap();
        }
    }
    // (c) closed form against the brute-force expectation
    let mut worst_c: f64 = 0.0;
    for alpha in [0.1, 0.3, 0.5, 0.7, 0.9] {
        let closed = fisher_information(alpha, &SeriesControl::default()).unwrap();
        let oracle = fisher_information_oracle(alpha, 1_000_000).unwrap().fisher;
        worst_c = worst_c.max(((closed - oracle) / closed).abs());
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        worst_a < 1e-4 && worst_b < 1e-8 && worst_c < 1e-6 && secs < 60.0,
        format!("(a) {worst_a:.2e} (b) {worst_b:.2e} (c) rel {worst_c:.2e}; {secs:.1}s"),
    )
}

fn criterion_3() -> Outcome {
    let k = match jeffreys_normalizer(&QuadratureControl::default()) {
        Ok(k) => k,
        Err(e) => return outcome(false, e.to_string()),
    };
    // midpoint rule in u with α = 1 − u², 10⁶ points
    let points = 1_000_000;
    let h = 1.0 / points as f64;
    let mut oracle = 0.0;
    for i in 0..points {
        let u = (i as f64 + 0.5) * h;
        oracle += 2.0 * u * jeffreys_unnormalized(1.0 - u * u).unwrap();
    }
    oracle *= h;
    let diff = (k - oracle).abs();
    outcome(
        k > 0.0 && k <= 2.364_157 && diff < 1e-6,
        format!("K = {k:.12}, midpoint oracle {oracle:.12}, |diff| {diff:.2e}"),
    )
}

fn criterion_4() -> Outcome {
    let mut min_p: f64 = 1.0;
    let chi = ChiSquared::new(20.0).unwrap();
    for alpha in [0.3, 0.5, 0.8] {
        let ys = YuleSimon::new(alpha).unwrap();
        let mut expected: Vec<f64> = (1..=20u64).map(|k| ys.pmf(k).unwrap()).collect();
        expected.push(ys.survival(21).unwrap());
        for seed in 1..=5u64 {
            let n = 100_000;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut observed = [0u64; 21];
            for k in ys.sample_with(&mut rng, n) {
                observed[(k.min(21) - 1) as usize] += 1;
            }
            let stat: f64 = observed
                .iter()
                .zip(&expected)
                .map(|(&o, &p)| {
                    let e = p * n as f64;
                    (o as f64 - e).powi(2) / e
                })
                .sum();
            min_p = min_p.min(1.0 - chi.cdf(stat));
        }
    }
    let ys = YuleSimon::new(0.7).unwrap();
    let n = 1_000_000;
    let draws = ys.sample(n, 77);
    let mean = draws.iter().map(|&k| k as f64).sum::<f64>() / n as f64;
    // Var K = ρ²/((ρ−1)²(ρ−2)) for ρ > 2
    let rho = ys.rho();
    let se = (rho * rho / ((rho - 1.0).powi(2) * (rho - 2.0)) / n as f64).sqrt();
    let z = (mean - 10.0 / 7.0) / se;
    outcome(
        min_p > 0.001 && z.abs() < 3.0,
        format!("min chi-square p-value {min_p:.4}; mean at 0.7 {mean:.5} ({z:+.2} SE)"),
    )
}

fn criterion_5() -> Outcome {
    let data = embedded("hits", CountMode::Surnames).unwrap();
    let mut worst: f64 = 0.0;
    for m in [10, 20] {
        let prior = loss_based_prior(m, &SeriesControl::default()).unwrap();
        let exact = exact_grid_posterior(&data, &prior).unwrap();
        let cfg = McmcConfig::new(25_000, 5_000, 5, 0.5).unwrap();
        let chain = sample_posterior_discrete(&data, &prior, &cfg).unwrap();
        let tv: f64 = prior
            .support()
            .iter()
            .zip(exact.masses())
            .map(|(a, p)| {
                let freq = chain.draws.iter().filter(|d| *d == a).count() as f64
                    / chain.draws.len() as f64;
                (freq - p).abs()
            })
            .sum::<f64>()
            / 2.0;
        worst = worst.max(tv);
    }
    outcome(
        worst < 0.02,
        format!("max TV over M in {{10, 20}}: {worst:.4}"),
    )
}

fn coverage_files(dir: &Path, tag: &str, workers: &str) -> Result<(), String> {
    let seed = STUDY_SEED.to_string();
    for (name, prior) in [
        ("loss10", vec!["--prior", "loss", "--m", "10"]),
        ("jeffreys", vec!["--prior", "jeffreys", "--m", "10"]),
    ] {
        let out = dir.join(format!("{tag}-{name}.csv"));
        let mut args = vec!["simulate"];
        args.extend(prior);
        args.extend([
            "--n",
            "100",
            "--reps",
            "100",
            "--iters",
            "10000",
            "--burnin",
            "2000",
            "--seed",
            &seed,
            "--workers",
            workers,
            "--out",
            out.to_str().unwrap(),
        ]);
        ys(&args)?;
    }
    Ok(())
}

fn criterion_6(dir: &Path) -> Outcome {
    let start = Instant::now();
    if let Err(e) = coverage_files(dir, "a", "3") {
        return outcome(false, e);
    }
    let parse = |name: &str| -> Vec<(f64, f64, f64)> {
        csv_rows(&dir.join(format!("a-{name}.csv")))
            .iter()
            .map(|r| {
                (
                    r[0].parse().unwrap(),
                    r[1].parse().unwrap(),
                    r[2].parse().unwrap(),
                )
            })
            .collect()
    };
    let loss = parse("loss10");
    let jeff = parse("jeffreys");
    let mean_cov = loss.iter().map(|r| r.1).sum::<f64>() / loss.len() as f64;
    let jeff_low = jeff
        .iter()
        .filter(|r| r.0 <= 0.5 + 1e-12)
        .map(|r| r.1)
        .fold(1.0, f64::min);
    let rmse = |rows: &[(f64, f64, f64)], a: f64| {
        rows.iter()
            .find(|r| (r.0 - a).abs() < 1e-9)
            .map_or(f64::NAN, |r| r.2)
    };
    let pass = loss.len() == 9
        && jeff.len() == 9
        && mean_cov >= 0.93
        && jeff_low >= 0.85
        && rmse(&loss, 0.8) < rmse(&loss, 0.2)
        && rmse(&jeff, 0.8) < rmse(&jeff, 0.2);
    outcome(
        pass,
        format!(
            "M=10 mean coverage {mean_cov:.3}; Jeffreys min coverage (alpha <= 0.5) {jeff_low:.2}; rel_rmse 0.2/0.8 loss {:.3}/{:.3}, Jeffreys {:.3}/{:.3}; {:.1}s",
            rmse(&loss, 0.2),
            rmse(&loss, 0.8),
            rmse(&jeff, 0.2),
            rmse(&jeff, 0.8),
            start.elapsed().as_secs_f64()
        ),
    )
}

fn fixed_files(dir: &Path, tag: &str) -> Result<(), String> {
    let seed = FIXED_SEED.to_string();
    for alpha in ["0.40", "0.68"] {
        let out = dir.join(format!("{tag}-fixed-{alpha}.csv"));
        ys(&[
            "fixed-sample",
            "--alpha",
            alpha,
            "--n",
            "100",
            "--seed",
            &seed,
            "--out",
            out.to_str().unwrap(),
        ])?;
    }
    Ok(())
}

fn criterion_7(dir: &Path) -> Outcome {
    if let Err(e) = fixed_files(dir, "a") {
        return outcome(false, e);
    }
    let mut pass = true;
    let mut detail = Vec::new();
    for (label, truth) in [("0.40", 0.40), ("0.68", 0.68)] {
        let rows = csv_rows(&dir.join(format!("a-fixed-{label}.csv")));
        pass &= rows.len() == 3;
        for r in &rows {
            let v: Vec<f64> = r[1..].iter().map(|x| x.parse().unwrap()).collect();
            pass &= (v[0] - truth).abs() <= 0.05 && v[2] <= truth && truth <= v[3];
            detail.push(format!(
                "{} {}: {:.3} ({:.2}, {:.2})",
                label, r[0], v[0], v[2], v[3]
            ));
        }
    }
    outcome(pass, format!("seed {FIXED_SEED}; {}", detail.join("; ")))
}

fn criterion_8(dir: &Path) -> Outcome {
    let runs = hits_fits(dir, "b")
        .and_then(|_| coverage_files(dir, "b", "1"))
        .and_then(|_| fixed_files(dir, "b"));
    if let Err(e) = runs {
        return outcome(false, e);
    }
    let mut compared = 0;
    let mut differing = Vec::new();
    let mut names: Vec<String> = std::fs::read_dir(dir)
        .unwrap()
        .filter_map(|e| e.ok())
        .map(|e| e.file_name().to_string_lossy().into_owned())
        .filter(|n| n.starts_with("a-"))
        .collect();
    names.sort();
    for name in names {
        let twin = format!("b-{}", &name[2..]);
        let a = std::fs::read(dir.join(&name)).unwrap();
        let b = std::fs::read(dir.join(&twin)).unwrap_or_default();
        compared += 1;
        if a != b {
            differing.push(name);
        }
    }
    outcome(
        differing.is_empty() && compared == 12,
        format!(
            "{compared} output files compared (coverage studies rerun with 1 worker vs 3); differing: {:?}",
            differing
        ),
    )
}

fn main() {
    let dir = tempfile::tempdir().expect("temporary directory");
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome>)> = vec![
        (
            "1 music-hits posterior summaries",
            Box::new(|| criterion_1(dir.path())),
        ),
        ("2 Fisher information identities", Box::new(criterion_2)),
        ("3 properness bound and normalizer", Box::new(criterion_3)),
        ("4 sampler correctness", Box::new(criterion_4)),
        (
            "5 discrete chain vs exact enumeration",
            Box::new(criterion_5),
        ),
        ("6 coverage study", Box::new(|| criterion_6(dir.path()))),
        (
            "7 fixed-sample studies",
            Box::new(|| criterion_7(dir.path())),
        ),
        ("8 determinism", Box::new(|| criterion_8(dir.path()))),
    ];
    let mut failed = 0;
    for (name, run) in &criteria {
        let o = run();
        if !o.pass {
            failed += 1;
        }
        println!(
            "{} criterion {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
