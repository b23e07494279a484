//! `detproc` — verification-suite driver, window sampler, and plot-data
//! export. Exit status: 0 when every report passes, 1 when any fails,
//! 2 for usage/config/runtime errors.

mod config;
mod plot;
mod suites;

use std::fs;
use std::io::BufWriter;
use std::path::PathBuf;
use std::process::exit;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use detproc::identities::VerificationReport;
use detproc::kernels::{make_kernel, GroundSpace, KernelSpec, Window};
use detproc::sampling::{write_samples_csv, Configuration, SeedSpec, WindowSampler};

use config::{RunConfig, Suite};

#[derive(Parser)]
#[command(name = "detproc", version, about = "determinantal-process verification suites")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a verification suite; writes reports.json and summary.csv.
    Verify {
        /// One of: symfun, giambelli-ope, fs-ope, fs-dpp, fredholm, sampling, all.
        suite: String,
        /// TOML run configuration (defaults are used when omitted).
        #[arg(long)]
        config: Option<PathBuf>,
        /// Override the master seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the Monte Carlo sample count.
        #[arg(long)]
        samples: Option<usize>,
        /// Override the output directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw configurations from a kernel window and write them as CSV,
    /// one configuration per line.
    Sample {
        /// Kernel spec as JSON, e.g. '{"kind":"discrete_sine","rho":0.5}'.
        spec: String,
        /// Window half-width T.
        #[arg(long)]
        window: f64,
        /// Number of configurations to draw.
        #[arg(long)]
        count: usize,
        /// Master seed; draw s uses stream s.
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Re-emit report files as plot-ready CSV.
    Plot {
        /// One or more reports.json files.
        reports: Vec<PathBuf>,
        /// Plot kind; only `convergence` is available.
        #[arg(long)]
        kind: String,
        /// Output CSV path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => exit(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            exit(2);
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32> {
    match cli.cmd {
        Cmd::Verify { suite, config, seed, samples, out } => {
            let suite = Suite::parse(&suite).map_err(|e| anyhow::anyhow!(e))?;
            let mut cfg = match config {
                Some(path) => RunConfig::load(&path).map_err(|e| anyhow::anyhow!(e))?,
                None => RunConfig::default(),
            };
            if let Some(s) = seed {
                cfg.seed = s;
            }
            if let Some(n) = samples {
                cfg.samples = n;
            }
            if let Some(dir) = out {
                cfg.out = dir;
            }
            cfg.validate(suite).map_err(|e| anyhow::anyhow!("config: {e}"))?;
            verify(suite, &cfg)
        }
        Cmd::Sample { spec, window, count, seed, out } => {
            sample(&spec, window, count, seed, &out)?;
            Ok(0)
        }
        Cmd::Plot { reports, kind, out } => {
            plot::emit(&reports, &kind, out.as_deref())?;
            Ok(0)
        }
    }
}

fn verify(suite: Suite, cfg: &RunConfig) -> Result<i32> {
    let reports = suites::run(suite, cfg)?;
    fs::create_dir_all(&cfg.out)
        .with_context(|| format!("creating {}", cfg.out.display()))?;

    let json_path = cfg.out.join("reports.json");
    let mut json = serde_json::to_string_pretty(&reports)?;
    json.push('\n');
    fs::write(&json_path, json).with_context(|| format!("writing {}", json_path.display()))?;

    let csv_path = cfg.out.join("summary.csv");
    fs::write(&csv_path, summary_csv(&reports))
        .with_context(|| format!("writing {}", csv_path.display()))?;

    let failed: Vec<&str> =
        reports.iter().filter(|r| !r.pass).map(|r| r.name.as_str()).collect();
    println!(
        "suite {suite}: {} reports, {} failed → {}",
        reports.len(),
        failed.len(),
        json_path.display()
    );
    if failed.is_empty() {
        Ok(0)
    } else {
        eprintln!("failed reports:");
        for name in failed {
            eprintln!("  {name}");
        }
        Ok(1)
    }
}

fn summary_csv(reports: &[VerificationReport]) -> String {
    let mut csv = String::from(
        "name,pass,lhs_re,lhs_im,rhs_re,rhs_im,abs_err,rel_err,tol,stderr,seed\n",
    );
    for r in reports {
        let stderr = r.stderr.map(|s| format!("{s:e}")).unwrap_or_default();
        let seed = r.seed.map(|s| s.to_string()).unwrap_or_default();
        csv.push_str(&format!(
            "{},{},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{},{}\n",
            r.name, r.pass, r.lhs.re, r.lhs.im, r.rhs.re, r.rhs.im, r.abs_err, r.rel_err,
            r.tol, stderr, seed
        ));
    }
    csv
}

fn sample(spec_json: &str, window: f64, count: usize, seed: u64, out: &PathBuf) -> Result<()> {
    if !(window.is_finite() && window > 0.0) {
        bail!("window: must be a positive finite half-width (got {window})");
    }
    if count == 0 {
        bail!("count: must draw at least one configuration");
    }
    let spec: KernelSpec =
        serde_json::from_str(spec_json).map_err(|e| anyhow::anyhow!("kernel spec: {e}"))?;
    let kernel = make_kernel(spec)?;
    let win = match kernel.ground {
        GroundSpace::Integers => {
            Window::Discrete { lo: -(window.round() as i64), hi: window.round() as i64 }
        }
        GroundSpace::Continuous { .. } => Window::Symmetric { t: window },
    };
    let grid = if matches!(kernel.ground, GroundSpace::Integers) { 0 } else { 200 };
    let sampler = WindowSampler::new(&kernel, &win, grid)?;
    let samples: Vec<Configuration> =
        (0..count).map(|s| sampler.sample(&SeedSpec::new(seed, s as u64))).collect();
    let file = fs::File::create(out).with_context(|| format!("creating {}", out.display()))?;
    write_samples_csv(BufWriter::new(file), &samples)?;
    println!("wrote {count} configurations to {}", out.display());
    Ok(())
}
