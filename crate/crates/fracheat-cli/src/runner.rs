//! Monte Carlo orchestration: schedule paths onto a worker pool, solve each
//! independently, and reduce records in path order so output bytes are
//! independent of the schedule.

use rayon::prelude::*;

use fracheat::error::Error;
use fracheat::noise::{sample_modes, stochastic_convolution};
use fracheat::rng::{derive_seed, DOMAIN_PATH};
use fracheat::solver::{check_hypotheses, picard_solve, PicardTrace};
use fracheat::spectral::{lp_norm, DirichletBasis};

use crate::config::{ConfigError, RunConfig};
use crate::report::{PathRecord, Provenance, RunCheck, RunReport, RunSummary};

/// Per-path `(t, ‖z(t)‖_p)` trace, present when requested by the config.
pub type ZNormTrace = Option<Vec<(f64, f64)>>;

pub struct RunOutcome {
    pub report: RunReport,
    pub z_norms: Vec<ZNormTrace>,
}

fn trace_record(
    path: usize,
    seed: u64,
    trace: &PicardTrace,
    sup_norm: f64,
    tol: f64,
    error: Option<String>,
) -> PathRecord {
    PathRecord {
        path,
        seed,
        k0: trace.k0,
        t0: trace.t0,
        hit_horizon: trace.hit_horizon,
        converged: trace.converged,
        iterations: trace.iterations,
        contraction_ratio: trace.max_stable_ratio(100.0 * tol),
        sup_norm,
        c_tilde_t0: trace.c_tilde_t0,
        cond1: trace.cond1,
        cond2: trace.cond2,
        error,
    }
}

fn failed_record(path: usize, seed: u64, error: String) -> PathRecord {
    PathRecord {
        path,
        seed,
        k0: f64::NAN,
        t0: f64::NAN,
        hit_horizon: false,
        converged: false,
        iterations: 0,
        contraction_ratio: None,
        sup_norm: f64::NAN,
        c_tilde_t0: f64::NAN,
        cond1: f64::NAN,
        cond2: f64::NAN,
        error: Some(error),
    }
}

fn solve_one(config: &RunConfig, path: usize) -> (PathRecord, ZNormTrace) {
    let seed = derive_seed(config.seed, DOMAIN_PATH, path as u64, 0);
    let spec = match config.problem_spec() {
        Ok(s) => s,
        Err(e) => return (failed_record(path, seed, e.to_string()), None),
    };
    let grid = match config.time_grid() {
        Ok(g) => g,
        Err(e) => return (failed_record(path, seed, e.to_string()), None),
    };
    let ens = match sample_modes(config.modes, spec.hurst, grid, seed, config.sampler) {
        Ok(e) => e,
        Err(e) => return (failed_record(path, seed, e.to_string()), None),
    };
    let z = stochastic_convolution(&ens);

    let z_norms = if config.emit_z_norms {
        match DirichletBasis::new(config.modes, config.spatial) {
            Ok(basis) => {
                let mut norms = Vec::with_capacity(grid.n_points());
                for (k, field) in z.fields().iter().enumerate() {
                    let g = basis.synthesize(field.coeffs());
                    norms.push((grid.point(k), lp_norm(&g, spec.p).unwrap_or(f64::NAN)));
                }
                Some(norms)
            }
            Err(e) => return (failed_record(path, seed, e.to_string()), None),
        }
    } else {
        None
    };

    let opts = config.picard_options();
    let record = match picard_solve(&spec, &z, &opts) {
        Ok((sol, trace)) => {
            let sup = sol.sup_lp_norm(spec.p).unwrap_or(f64::NAN);
            trace_record(path, seed, &trace, sup, opts.tol, None)
        }
        Err(Error::NonConvergence { trace, last_diff }) => {
            let sup = trace.sup_norms.last().copied().unwrap_or(f64::NAN);
            let msg = format!("non-convergence: last diff {last_diff:e}");
            trace_record(path, seed, &trace, sup, opts.tol, Some(msg))
        }
        Err(Error::BallEscape { trace, norm, bound }) => {
            let msg = format!("ball escape: {norm} > {bound}");
            trace_record(path, seed, &trace, norm, opts.tol, Some(msg))
        }
        Err(e) => failed_record(path, seed, e.to_string()),
    };
    (record, z_norms)
}

fn run_checks(config: &RunConfig, records: &[PathRecord]) -> Vec<RunCheck> {
    let mut checks = Vec::new();

    let spec_ok = config.problem_spec();
    match &spec_ok {
        Ok(spec) => {
            let rep = check_hypotheses(spec);
            checks.push(RunCheck {
                name: "hypotheses".into(),
                pass: rep.all_satisfied(),
                detail: rep.to_string(),
            });
        }
        Err(e) => {
            checks.push(RunCheck {
                name: "hypotheses".into(),
                pass: false,
                detail: e.to_string(),
            });
        }
    }

    let failed: Vec<usize> = records
        .iter()
        .filter(|r| !r.converged)
        .map(|r| r.path)
        .collect();
    checks.push(RunCheck {
        name: "all_paths_converged".into(),
        pass: failed.is_empty(),
        detail: if failed.is_empty() {
            format!("{} of {} paths converged", records.len(), records.len())
        } else {
            format!("paths failed to converge: {failed:?}")
        },
    });

    let t0_bad: Vec<usize> = records
        .iter()
        .filter(|r| r.error.is_none() && (r.c_tilde_t0.is_nan() || r.c_tilde_t0 > 1.0 + 1e-9))
        .map(|r| r.path)
        .collect();
    checks.push(RunCheck {
        name: "t0_consistency".into(),
        pass: t0_bad.is_empty(),
        detail: if t0_bad.is_empty() {
            "C̃(T0) <= 1 on every path".into()
        } else {
            format!("C̃(T0) > 1 on paths {t0_bad:?}")
        },
    });

    let ball_bad: Vec<usize> = records
        .iter()
        .filter(|r| {
            r.error.is_none()
                && r.k0 > 0.0
                && r.sup_norm > 3.0 * r.k0 * (1.0 + config.ball_slack) * (1.0 + 1e-12)
        })
        .map(|r| r.path)
        .collect();
    checks.push(RunCheck {
        name: "ball_containment".into(),
        pass: ball_bad.is_empty(),
        detail: if ball_bad.is_empty() {
            "sup norms within 3K0 (plus slack) on every path".into()
        } else {
            format!("ball exceeded on paths {ball_bad:?}")
        },
    });

    // Replay path 0 and require an identical record: catches any
    // nondeterminism introduced by scheduling or shared state.
    if !records.is_empty() {
        let (replay, _) = solve_one(config, 0);
        let same = replay == records[0];
        checks.push(RunCheck {
            name: "replay_determinism".into(),
            pass: same,
            detail: if same {
                "path 0 replays bit-identically".into()
            } else {
                "path 0 replay differs".into()
            },
        });
    }

    checks
}

/// Solve `paths` independent noise samples and assemble the report.
/// `config.threads` selects the pool width (None = rayon default); records
/// are keyed by path index so the report is schedule-independent.
pub fn run(config: &RunConfig) -> Result<RunOutcome, ConfigError> {
    // Surface hard configuration errors before spawning workers.
    config.problem_spec()?;
    config.time_grid()?;

    let solve_all = || -> Vec<(PathRecord, ZNormTrace)> {
        (0..config.paths)
            .into_par_iter()
            .map(|i| solve_one(config, i))
            .collect()
    };
    let outcomes = match config.threads {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| ConfigError(format!("thread pool: {e}")))?;
            pool.install(solve_all)
        }
        None => solve_all(),
    };

    let mut records = Vec::with_capacity(outcomes.len());
    let mut z_norms = Vec::with_capacity(outcomes.len());
    for (record, norms) in outcomes {
        records.push(record);
        z_norms.push(norms);
    }

    let checks = run_checks(config, &records);
    let summary = RunSummary::from_records(&records);
    let report = RunReport {
        provenance: Provenance {
            version: env!("CARGO_PKG_VERSION").to_string(),
            config_hash: config.config_hash(),
            master_seed: config.seed,
            config: config.canonical_map(),
        },
        records,
        summary,
        checks,
    };
    Ok(RunOutcome { report, z_norms })
}
