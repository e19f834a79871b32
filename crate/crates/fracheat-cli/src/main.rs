use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use fracheat_cli::config::RunConfig;
use fracheat_cli::report::{emit_tables, write_run_outputs, RunReport};
use fracheat_cli::runner;
use fracheat_cli::validate::{run_suites, Suite};

/// Pathwise simulator for the semilinear heat equation driven by
/// cylindrical fractional noise (H > 1/2).
#[derive(Parser)]
#[command(name = "fracheat", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample noise paths, solve each by Picard iteration, and write
    /// report.json / paths.csv to the output directory.
    Run(Box<RunArgs>),
    /// Run a named validation suite at desk scale with deterministic seeds.
    Validate {
        /// fbm | kernel | semigroup | convolution | solver | all
        #[arg(long, default_value = "all")]
        suite: Suite,
        #[arg(long, default_value_t = 1905)]
        seed: u64,
    },
    /// Recompute paths.csv and summary.json from a stored report.json.
    Tables {
        #[arg(long)]
        report: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Flat `key = value` configuration file; command-line flags override.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    hurst: Option<f64>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    /// Growth constant C of the (h1) estimate; 0 disables the nonlinearity.
    #[arg(long)]
    c: Option<f64>,
    #[arg(long)]
    horizon: Option<f64>,
    /// Number of eigenmodes in the truncated noise.
    #[arg(long)]
    modes: Option<usize>,
    /// Number of time steps.
    #[arg(long)]
    steps: Option<usize>,
    /// Number of spatial grid intervals for quadrature.
    #[arg(long)]
    spatial: Option<usize>,
    /// Number of Monte Carlo paths.
    #[arg(long)]
    paths: Option<usize>,
    /// cholesky | circulant
    #[arg(long)]
    sampler: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    max_iters: Option<usize>,
    #[arg(long)]
    u0_mode: Option<usize>,
    #[arg(long)]
    u0_amplitude: Option<f64>,
    /// Also write per-path z_norm_{k}.csv traces of t vs ‖z(t)‖_p.
    #[arg(long)]
    emit_z_norms: bool,
    /// Worker threads; defaults to FRACHEAT_THREADS or the rayon default.
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

fn build_config(args: &RunArgs) -> Result<RunConfig, String> {
    let mut cfg = RunConfig::default();
    if let Some(path) = &args.config {
        cfg.apply_file(path).map_err(|e| e.to_string())?;
    }
    macro_rules! set_opt {
        ($field:ident, $key:literal) => {
            if let Some(v) = &args.$field {
                cfg.set($key, &v.to_string()).map_err(|e| e.to_string())?;
            }
        };
    }
    set_opt!(hurst, "hurst");
    set_opt!(p, "p");
    set_opt!(alpha, "alpha");
    set_opt!(c, "c");
    set_opt!(horizon, "horizon");
    set_opt!(modes, "modes");
    set_opt!(steps, "steps");
    set_opt!(spatial, "spatial");
    set_opt!(paths, "paths");
    set_opt!(sampler, "sampler");
    set_opt!(seed, "seed");
    set_opt!(tol, "tol");
    set_opt!(max_iters, "max_iters");
    set_opt!(u0_mode, "u0_mode");
    set_opt!(u0_amplitude, "u0_amplitude");
    if args.emit_z_norms {
        cfg.emit_z_norms = true;
    }
    cfg.threads = args.threads.or_else(|| {
        std::env::var("FRACHEAT_THREADS")
            .ok()
            .and_then(|v| v.parse().ok())
    });
    cfg.out_dir = args.out.clone();
    Ok(cfg)
}

fn cmd_run(args: &RunArgs) -> ExitCode {
    let cfg = match build_config(args) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(2);
        }
    };
    match runner::run(&cfg) {
        Ok(outcome) => {
            if let Err(e) = write_run_outputs(&outcome.report, &outcome.z_norms, &cfg.out_dir) {
                eprintln!("failed to write outputs: {e}");
                return ExitCode::from(2);
            }
            let summary = &outcome.report.summary;
            println!(
                "{} paths, {} converged (mean {:.1} iterations); outputs in {}",
                summary.paths,
                summary.converged,
                summary.mean_iterations,
                cfg.out_dir.display()
            );
            for check in &outcome.report.checks {
                println!(
                    "  [{}] {}: {}",
                    if check.pass { "ok" } else { "FAIL" },
                    check.name,
                    check.detail
                );
            }
            if outcome.report.all_checks_pass() {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(2)
        }
    }
}

fn cmd_validate(suite: Suite, seed: u64) -> ExitCode {
    let reports = run_suites(suite, seed);
    let mut all_pass = true;
    for report in &reports {
        println!("suite {}:", report.suite);
        for c in &report.checks {
            println!(
                "  [{}] {} - {}",
                if c.pass { "ok" } else { "FAIL" },
                c.name,
                c.detail
            );
        }
        all_pass &= report.pass();
    }
    if all_pass {
        println!("all suites passed");
        ExitCode::SUCCESS
    } else {
        println!("validation FAILED");
        ExitCode::FAILURE
    }
}

fn cmd_tables(report_path: &Path, out: &Path) -> ExitCode {
    let text = match std::fs::read_to_string(report_path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("cannot read {}: {e}", report_path.display());
            return ExitCode::from(2);
        }
    };
    let report: RunReport = match serde_json::from_str(&text) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("cannot parse report: {e}");
            return ExitCode::from(2);
        }
    };
    if let Err(e) = emit_tables(&report, out) {
        eprintln!("failed to write tables: {e}");
        return ExitCode::from(2);
    }
    println!("tables written to {}", out.display());
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Run(args) => cmd_run(&args),
        Command::Validate { suite, seed } => cmd_validate(suite, seed),
        Command::Tables { report, out } => cmd_tables(&report, &out),
    }
}
