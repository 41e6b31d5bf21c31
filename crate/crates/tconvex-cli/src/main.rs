//! Command-line front-end: sampling, defect profiles, scale selection,
//! reconstruction, tangent estimation and the desk-scale benchmarks.

mod bench;
mod commands;
mod manifest;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "tconvex",
    version,
    about = "Manifold reconstruction via t-convex hulls with data-driven scale selection"
)]
struct Cli {
    /// Worker thread cap (default: all cores; env fallback MFLD_THREADS).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw a sample from a reference manifold and write it as CSV.
    Sample(SampleArgs),
    /// Compute the graph convexity defect profile of a cloud at fixed K.
    Defect(DefectArgs),
    /// Run the data-driven scale selection (jump heuristic + K doubling).
    Select(SelectArgs),
    /// Build the t-convex hull complex of a cloud.
    Reconstruct(ReconstructArgs),
    /// Estimate tangent spaces at the selected scale.
    Tangent(TangentArgs),
    /// Run a named experiment matrix and write per-trial rows.
    Bench(BenchArgs),
}

#[derive(Args)]
pub struct SampleArgs {
    /// Manifold family: circle | torus | swissroll | bumped-sphere.
    #[arg(long, conflicts_with = "config")]
    manifold: Option<String>,
    /// Number of points.
    #[arg(long)]
    n: Option<usize>,
    /// Noise channel: none | tubular:G | ambient:G.
    #[arg(long, default_value = "none")]
    noise: String,
    /// Ambient dimension (circle only; others are fixed at 3).
    #[arg(long)]
    ambient_dim: Option<usize>,
    /// Circle radius.
    #[arg(long)]
    radius: Option<f64>,
    /// Sample the circle at equally spaced angles.
    #[arg(long, default_value_t = false)]
    stratified: bool,
    /// RNG seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// JSON model configuration file (alternative to flags).
    #[arg(long)]
    config: Option<std::path::PathBuf>,
    /// Write a header row.
    #[arg(long, default_value_t = false)]
    header: bool,
    /// Also write the paired clean cloud (noise runs only).
    #[arg(long)]
    clean_out: Option<std::path::PathBuf>,
    /// Output CSV path.
    #[arg(short, long)]
    out: std::path::PathBuf,
}

#[derive(Args)]
pub struct DefectArgs {
    /// Input cloud CSV.
    input: std::path::PathBuf,
    /// Neighbor count for the horizon.
    #[arg(long, default_value_t = 16)]
    k: usize,
    /// Output profile JSON path.
    #[arg(short, long)]
    out: std::path::PathBuf,
}

#[derive(Args)]
pub struct SelectArgs {
    /// Input cloud CSV.
    input: std::path::PathBuf,
    /// Initial neighbor count.
    #[arg(long, default_value_t = 16)]
    k0: usize,
    /// λ grid spacing.
    #[arg(long, default_value_t = 0.01)]
    grid_step: f64,
    /// Cap on the escalated K (default n-1).
    #[arg(long)]
    max_k: Option<usize>,
    /// Fixed-λ mode: skip the jump heuristic and use this λ.
    #[arg(long)]
    lambda: Option<f64>,
    /// Output selection JSON path.
    #[arg(short, long)]
    out: std::path::PathBuf,
    /// Plot table of (λ, g) pairs; default `<out>.g.tsv`.
    #[arg(long)]
    g_tsv: Option<std::path::PathBuf>,
    /// Plot table of (t, h) pairs; default `<out>.h.tsv`.
    #[arg(long)]
    h_tsv: Option<std::path::PathBuf>,
}

#[derive(Args)]
pub struct ReconstructArgs {
    /// Input cloud CSV.
    input: std::path::PathBuf,
    /// Scale: a number, `auto` (run selection), or `oracle:d:fmin`.
    #[arg(long)]
    t: String,
    /// Simplex dimension cap.
    #[arg(long, default_value_t = 2)]
    dim: usize,
    /// Output complex JSON path.
    #[arg(short, long)]
    out: std::path::PathBuf,
}

#[derive(Args)]
pub struct TangentArgs {
    /// Input cloud CSV.
    input: std::path::PathBuf,
    /// Intrinsic dimension of the fitted tangent spaces.
    #[arg(long)]
    dim: usize,
    /// Fixed base scale; defaults to running the selection for t_sel.
    #[arg(long)]
    t: Option<f64>,
    /// Neighborhood radius = scale-mult × base scale.
    #[arg(long, default_value_t = 11.0)]
    scale_mult: f64,
    /// Sup-norm refinement pass on top of the principal-component fit.
    #[arg(long, default_value_t = false)]
    refine: bool,
    /// Output TSV path.
    #[arg(short, long)]
    out: std::path::PathBuf,
}

#[derive(Args)]
pub struct BenchArgs {
    /// figure8 | figure9 | figure10 | rate-circle | rate-torus.
    #[arg(long)]
    experiment: String,
    /// Trials per grid point.
    #[arg(long)]
    trials: Option<usize>,
    /// Comma-separated n grid override.
    #[arg(long)]
    n_grid: Option<String>,
    /// Base seed; trial s uses seed base + s.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output TSV path.
    #[arg(short, long)]
    out: std::path::PathBuf,
}

fn main() {
    let cli = Cli::parse();
    let threads = cli.threads.or_else(|| {
        std::env::var("MFLD_THREADS")
            .ok()
            .and_then(|v| v.parse().ok())
    });
    if let Some(t) = threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t.max(1))
            .build_global()
            .ok();
    }
    let outcome = match cli.command {
        Command::Sample(args) => commands::run_sample(&args),
        Command::Defect(args) => commands::run_defect(&args),
        Command::Select(args) => commands::run_select(&args),
        Command::Reconstruct(args) => commands::run_reconstruct(&args),
        Command::Tangent(args) => commands::run_tangent(&args),
        Command::Bench(args) => bench::run(&args),
    };
    if let Err(e) = outcome {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}

/// Parses `none`, `tubular:G`, `ambient:G`.
pub fn parse_noise(spec: &str) -> Result<tconvex::manifolds::NoiseSpec> {
    use tconvex::manifolds::NoiseSpec;
    if spec == "none" {
        return Ok(NoiseSpec::None);
    }
    let (kind, gamma) = spec
        .split_once(':')
        .with_context(|| format!("noise '{spec}' must be none, tubular:G or ambient:G"))?;
    let gamma: f64 = gamma
        .parse()
        .with_context(|| format!("bad noise amplitude in '{spec}'"))?;
    match kind {
        "tubular" => Ok(NoiseSpec::Tubular { gamma }),
        "ambient" => Ok(NoiseSpec::Ambient { gamma }),
        other => bail!("unknown noise kind '{other}'"),
    }
}
