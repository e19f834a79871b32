//! Machine-readable run reports: `report.json`, `paths.csv`, and the
//! derived summary tables.
//!
//! Everything serialized here is a pure function of `(config, seed)`: no
//! timestamps, no thread counts, no timings. Floats in the CSV carry 17
//! significant digits so they round-trip exactly.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use fracheat::stats::quantile;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Provenance {
    pub version: String,
    pub config_hash: String,
    pub master_seed: u64,
    pub config: BTreeMap<String, String>,
}

/// One row per solved path.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathRecord {
    pub path: usize,
    pub seed: u64,
    pub k0: f64,
    pub t0: f64,
    pub hit_horizon: bool,
    pub converged: bool,
    pub iterations: usize,
    /// Largest stable successive-difference ratio of the Picard iteration.
    pub contraction_ratio: Option<f64>,
    /// `sup_t ‖u‖_p` of the final iterate.
    pub sup_norm: f64,
    pub c_tilde_t0: f64,
    pub cond1: f64,
    pub cond2: f64,
    /// Present when the solve failed outright (not mere non-convergence).
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Quantiles {
    pub min: f64,
    pub q25: f64,
    pub median: f64,
    pub q75: f64,
    pub max: f64,
}

impl Quantiles {
    pub fn from_values(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let mut sorted = values.to_vec();
        sorted.sort_by(|a, b| a.total_cmp(b));
        Some(Quantiles {
            min: quantile(&sorted, 0.0),
            q25: quantile(&sorted, 0.25),
            median: quantile(&sorted, 0.5),
            q75: quantile(&sorted, 0.75),
            max: quantile(&sorted, 1.0),
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunSummary {
    pub paths: usize,
    pub converged: usize,
    pub pass_rate: f64,
    pub mean_iterations: f64,
    pub k0: Option<Quantiles>,
    pub t0: Option<Quantiles>,
}

impl RunSummary {
    pub fn from_records(records: &[PathRecord]) -> Self {
        let paths = records.len();
        let converged = records.iter().filter(|r| r.converged).count();
        let mean_iterations = if paths == 0 {
            0.0
        } else {
            records.iter().map(|r| r.iterations as f64).sum::<f64>() / paths as f64
        };
        let k0: Vec<f64> = records
            .iter()
            .map(|r| r.k0)
            .filter(|v| v.is_finite())
            .collect();
        let t0: Vec<f64> = records
            .iter()
            .map(|r| r.t0)
            .filter(|v| v.is_finite())
            .collect();
        RunSummary {
            paths,
            converged,
            pass_rate: if paths == 0 {
                1.0
            } else {
                converged as f64 / paths as f64
            },
            mean_iterations,
            k0: Quantiles::from_values(&k0),
            t0: Quantiles::from_values(&t0),
        }
    }
}

/// Outcome of one run-level consistency check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunCheck {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunReport {
    pub provenance: Provenance,
    pub records: Vec<PathRecord>,
    pub summary: RunSummary,
    pub checks: Vec<RunCheck>,
}

impl RunReport {
    pub fn all_checks_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

pub const CSV_HEADER: &str = "path,seed,k0,t0,converged,iterations,contraction_ratio,sup_norm";

fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn records_to_csv(records: &[PathRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        let ratio = r.contraction_ratio.map(fmt_f64).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.path,
            r.seed,
            fmt_f64(r.k0),
            fmt_f64(r.t0),
            r.converged,
            r.iterations,
            ratio,
            fmt_f64(r.sup_norm),
        ));
    }
    out
}

/// Parsed `paths.csv` row: `(path, seed, k0, t0, converged, iterations,
/// contraction_ratio, sup_norm)`.
pub type CsvRow = (usize, u64, f64, f64, bool, usize, Option<f64>, f64);

/// Minimal CSV reader for the fixed schema above; used by the cross-format
/// consistency checks.
pub fn csv_to_rows(csv: &str) -> Result<Vec<CsvRow>, String> {
    let mut lines = csv.lines();
    let header = lines.next().ok_or("empty csv")?;
    if header != CSV_HEADER {
        return Err(format!("unexpected header: {header}"));
    }
    let mut rows = Vec::new();
    for line in lines {
        if line.is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 8 {
            return Err(format!("bad row: {line}"));
        }
        let parse_f = |s: &str| s.parse::<f64>().map_err(|e| format!("{e}: {s}"));
        rows.push((
            cols[0].parse().map_err(|e| format!("{e}"))?,
            cols[1].parse().map_err(|e| format!("{e}"))?,
            parse_f(cols[2])?,
            parse_f(cols[3])?,
            cols[4].parse().map_err(|e| format!("{e}"))?,
            cols[5].parse().map_err(|e| format!("{e}"))?,
            if cols[6].is_empty() {
                None
            } else {
                Some(parse_f(cols[6])?)
            },
            parse_f(cols[7])?,
        ));
    }
    Ok(rows)
}

/// Write `report.json` and `paths.csv` (and optional per-path noise-norm
/// traces) under `dir`.
pub fn write_run_outputs(
    report: &RunReport,
    z_norms: &[Option<Vec<(f64, f64)>>],
    dir: &Path,
) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    let json = serde_json::to_string_pretty(report).expect("report serializes");
    std::fs::write(dir.join("report.json"), json + "\n")?;
    std::fs::write(dir.join("paths.csv"), records_to_csv(&report.records))?;
    for (idx, norms) in z_norms.iter().enumerate() {
        if let Some(norms) = norms {
            let mut f = std::fs::File::create(dir.join(format!("z_norm_{idx}.csv")))?;
            writeln!(f, "t,z_norm")?;
            for (t, v) in norms {
                writeln!(f, "{},{}", fmt_f64(*t), fmt_f64(*v))?;
            }
        }
    }
    Ok(())
}

/// Summary-table emission: `summary.json` recomputed from the report's
/// records plus a copy of `paths.csv`, for consumption by plotting scripts.
pub fn emit_tables(report: &RunReport, dir: &Path) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join("paths.csv"), records_to_csv(&report.records))?;
    let summary = RunSummary::from_records(&report.records);
    let json = serde_json::to_string_pretty(&summary).expect("summary serializes");
    std::fs::write(dir.join("summary.json"), json + "\n")?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(path: usize, k0: f64, t0: f64) -> PathRecord {
        PathRecord {
            path,
            seed: path as u64 + 100,
            k0,
            t0,
            hit_horizon: false,
            converged: true,
            iterations: 5,
            contraction_ratio: Some(0.25),
            sup_norm: 1.5 * k0,
            c_tilde_t0: 1.0,
            cond1: 1.0,
            cond2: 0.8,
            error: None,
        }
    }

    #[test]
    fn csv_round_trip_exact() {
        let records = vec![record(0, 0.12345678901234567, 0.9), record(1, 2.5e-3, 1.0)];
        let csv = records_to_csv(&records);
        let rows = csv_to_rows(&csv).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].2, records[0].k0);
        assert_eq!(rows[1].3, records[1].t0);
        assert_eq!(rows[0].6, Some(0.25));
    }

    #[test]
    fn empty_report_has_header_only_csv() {
        let csv = records_to_csv(&[]);
        assert_eq!(csv, format!("{CSV_HEADER}\n"));
        let summary = RunSummary::from_records(&[]);
        assert_eq!(summary.paths, 0);
        assert!(summary.k0.is_none());
    }

    #[test]
    fn quantiles_match_recomputation() {
        let records: Vec<PathRecord> = (0..7)
            .map(|i| record(i, (i as f64) * 0.1 + 0.2, 1.0 - i as f64 * 0.05))
            .collect();
        let summary = RunSummary::from_records(&records);
        let q = summary.k0.unwrap();
        assert_eq!(q.min, 0.2);
        assert!((q.median - 0.5).abs() < 1e-15);
        assert!((q.max - 0.8).abs() < 1e-12);
    }
}
