//! Seeded experiment matrices with per-trial rows and summary statistics.

use crate::manifest::ManifestBuilder;
use crate::BenchArgs;
use anyhow::{bail, Result};
use std::io::Write;
use std::time::Instant;
use tconvex::estimate::{oracle_scale, reconstruct, reconstruction_risk};
use tconvex::io::fmt_g17;
use tconvex::manifolds::{epsilon_rate, sample, Circle, ManifoldModel, NoiseSpec, SwissRoll, Torus};
use tconvex::select::{select_scale, SelectConfig};

/// Default density floor for the torus oracle-scale bench: picked so the
/// oracle radius stays within ~1.2× the reach across the n grid, keeping the
/// quadratic hull-to-manifold regime observable at desk scale.
const RATE_TORUS_FMIN: f64 = 0.025;

struct TrialRow {
    case: String,
    n: usize,
    seed: u64,
    k_max: usize,
    lambda_choice: f64,
    t_sel: f64,
    eps: f64,
    risk: f64,
    runtime_s: f64,
}

pub fn run(args: &BenchArgs) -> Result<()> {
    let trials_default: usize = match args.experiment.as_str() {
        "figure8" => 20,
        "figure9" => 10,
        "figure10" => 5,
        "rate-circle" | "rate-torus" => 10,
        other => bail!("unknown experiment '{other}'"),
    };
    let trials = args.trials.unwrap_or(trials_default);
    let n_grid: Vec<usize> = match &args.n_grid {
        Some(spec) => spec
            .split(',')
            .map(|x| x.trim().parse::<usize>())
            .collect::<std::result::Result<_, _>>()?,
        None => match args.experiment.as_str() {
            "figure8" => vec![100],
            "figure9" => vec![100, 300, 1000, 3000, 10000],
            "figure10" => vec![10000],
            _ => vec![500, 1000, 2000, 4000, 8000],
        },
    };
    let mut manifest = ManifestBuilder::new(
        "bench",
        serde_json::json!({
            "experiment": args.experiment,
            "trials": trials,
            "n_grid": n_grid,
            "seed": args.seed,
        }),
        Some(args.seed),
    );
    let rows = match args.experiment.as_str() {
        "figure8" => figure8(&n_grid, trials, args.seed)?,
        "figure9" => figure9(&n_grid, trials, args.seed)?,
        "figure10" => figure10(&n_grid, trials, args.seed)?,
        "rate-circle" => rate(&n_grid, trials, args.seed, RateCase::Circle)?,
        "rate-torus" => rate(&n_grid, trials, args.seed, RateCase::Torus)?,
        _ => unreachable!(),
    };
    manifest.phase("trials");
    write_rows(&args.out, &rows, &args.experiment)?;
    manifest.add_output(&args.out);
    manifest.phase("write");
    manifest.write()
}

fn selection_trial(
    case: &str,
    model: &ManifoldModel,
    noise: NoiseSpec,
    n: usize,
    seed: u64,
    eps_resolution: f64,
) -> Result<TrialRow> {
    let started = Instant::now();
    let out = sample(model, n, noise, seed)?;
    let result = select_scale(&out.cloud, &SelectConfig::default())?;
    let eps = epsilon_rate(model, &out.cloud, eps_resolution)?.value;
    Ok(TrialRow {
        case: case.to_string(),
        n,
        seed,
        k_max: result.k_trace.last().map(|e| e.k).unwrap_or(0),
        lambda_choice: result.lambda_choice,
        t_sel: result.t_sel,
        eps,
        risk: f64::NAN,
        runtime_s: started.elapsed().as_secs_f64(),
    })
}

fn figure8(n_grid: &[usize], trials: usize, seed0: u64) -> Result<Vec<TrialRow>> {
    let model = ManifoldModel::Circle(Circle::new(1.0)?);
    let mut rows = Vec::new();
    for &n in n_grid {
        for s in 0..trials {
            rows.push(selection_trial(
                "circle-tubular",
                &model,
                NoiseSpec::Tubular { gamma: 0.1 },
                n,
                seed0 + s as u64,
                model.reach() / 200.0,
            )?);
        }
    }
    Ok(rows)
}

fn figure9(n_grid: &[usize], trials: usize, seed0: u64) -> Result<Vec<TrialRow>> {
    let mut rows = Vec::new();
    for &n in n_grid {
        // Circle on a random plane of R^100 with ambient noise of size
        // (ln n / n)^2 (d = 1), plus the torus and swiss roll classes.
        let gamma = ((n as f64).ln() / n as f64).powi(2);
        let cases: Vec<(String, ManifoldModel, NoiseSpec)> = vec![
            (
                "circle-r100".into(),
                ManifoldModel::Circle(Circle::embedded(1.0, 100, seed0)?),
                NoiseSpec::Ambient { gamma },
            ),
            (
                "torus".into(),
                ManifoldModel::Torus(Torus::new(1.0, 4.0)?),
                NoiseSpec::None,
            ),
            (
                "swissroll".into(),
                ManifoldModel::SwissRoll(SwissRoll::standard()),
                NoiseSpec::None,
            ),
        ];
        for (case, model, noise) in cases {
            for s in 0..trials {
                let started = Instant::now();
                let out = sample(&model, n, noise, seed0 + s as u64)?;
                let result = select_scale(&out.cloud, &SelectConfig::default())?;
                rows.push(TrialRow {
                    case: case.clone(),
                    n,
                    seed: seed0 + s as u64,
                    k_max: result.k_trace.last().map(|e| e.k).unwrap_or(0),
                    lambda_choice: result.lambda_choice,
                    t_sel: result.t_sel,
                    eps: f64::NAN,
                    risk: f64::NAN,
                    runtime_s: started.elapsed().as_secs_f64(),
                });
            }
        }
    }
    Ok(rows)
}

fn figure10(n_grid: &[usize], trials: usize, seed0: u64) -> Result<Vec<TrialRow>> {
    let mut rows = Vec::new();
    let cases: Vec<(String, ManifoldModel)> = vec![
        ("torus".into(), ManifoldModel::Torus(Torus::new(1.0, 4.0)?)),
        (
            "swissroll".into(),
            ManifoldModel::SwissRoll(SwissRoll::standard()),
        ),
    ];
    for &n in n_grid {
        for (case, model) in &cases {
            for s in 0..trials {
                rows.push(selection_trial(
                    case,
                    model,
                    NoiseSpec::None,
                    n,
                    seed0 + s as u64,
                    model.reach() / 100.0,
                )?);
            }
        }
    }
    Ok(rows)
}

enum RateCase {
    Circle,
    Torus,
}

fn rate(n_grid: &[usize], trials: usize, seed0: u64, case: RateCase) -> Result<Vec<TrialRow>> {
    let mut rows = Vec::new();
    for &n in n_grid {
        for s in 0..trials {
            let started = Instant::now();
            let seed = seed0 + s as u64;
            let (name, model, d, fmin) = match case {
                RateCase::Circle => (
                    "rate-circle",
                    ManifoldModel::Circle(Circle::new(1.0)?),
                    1usize,
                    1.0 / std::f64::consts::TAU,
                ),
                RateCase::Torus => (
                    "rate-torus",
                    ManifoldModel::Torus(Torus::new(1.0, 4.0)?),
                    2usize,
                    RATE_TORUS_FMIN,
                ),
            };
            let out = sample(&model, n, NoiseSpec::None, seed)?;
            let t = oracle_scale(n, d, fmin)?;
            let complex = reconstruct(&out.cloud, t, d)?;
            // Resolution tied to the expected risk scale, floored for the
            // tiny circle risks at large n.
            let resolution = match case {
                RateCase::Circle => (t * t / 20.0).clamp(2e-6, model.reach() / 200.0),
                RateCase::Torus => model.reach() / 50.0,
            };
            let risk = reconstruction_risk(&complex, &out.cloud, &model, resolution)?;
            rows.push(TrialRow {
                case: name.to_string(),
                n,
                seed,
                k_max: 0,
                lambda_choice: f64::NAN,
                t_sel: t,
                eps: f64::NAN,
                risk,
                runtime_s: started.elapsed().as_secs_f64(),
            });
        }
    }
    Ok(rows)
}

fn write_rows(path: &std::path::Path, rows: &[TrialRow], experiment: &str) -> Result<()> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(
        out,
        "case\tn\tseed\tk_max\tlambda_choice\tt_sel\teps\trisk\truntime_s"
    )?;
    for r in rows {
        writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            r.case,
            r.n,
            r.seed,
            r.k_max,
            fmt_g17(r.lambda_choice),
            fmt_g17(r.t_sel),
            fmt_g17(r.eps),
            fmt_g17(r.risk),
            fmt_g17(r.runtime_s),
        )?;
    }
    // Per-(case, n) summaries.
    let mut keys: Vec<(String, usize)> = rows
        .iter()
        .map(|r| (r.case.clone(), r.n))
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    keys.sort();
    let mut mean_risks: Vec<(String, usize, f64)> = Vec::new();
    for (case, n) in keys {
        let group: Vec<&TrialRow> = rows
            .iter()
            .filter(|r| r.case == case && r.n == n)
            .collect();
        let mean = |f: fn(&TrialRow) -> f64| -> f64 {
            let vals: Vec<f64> = group.iter().map(|r| f(r)).filter(|v| v.is_finite()).collect();
            if vals.is_empty() {
                f64::NAN
            } else {
                vals.iter().sum::<f64>() / vals.len() as f64
            }
        };
        let max_k = group.iter().map(|r| r.k_max).max().unwrap_or(0);
        writeln!(
            out,
            "# summary case={case} n={n} mean_lambda_choice={} mean_t_sel={} mean_eps={} mean_risk={} max_k={max_k}",
            fmt_g17(mean(|r| r.lambda_choice)),
            fmt_g17(mean(|r| r.t_sel)),
            fmt_g17(mean(|r| r.eps)),
            fmt_g17(mean(|r| r.risk)),
        )?;
        let mr = mean(|r| r.risk);
        if mr.is_finite() {
            mean_risks.push((case, n, mr));
        }
    }
    if experiment.starts_with("rate") && mean_risks.len() >= 2 {
        let points: Vec<(f64, f64)> = mean_risks
            .iter()
            .map(|&(_, n, r)| (((n as f64).ln() / n as f64).ln(), r.ln()))
            .collect();
        writeln!(out, "# slope log(mean risk) vs log(ln n / n): {}", fmt_g17(slope(&points)))?;
    }
    Ok(())
}

/// Least-squares slope of y against x.
pub fn slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let num: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let den: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    num / den
}
