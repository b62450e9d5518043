use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{EstimatorKind, SweepConfig};
use super::{estimate_excess_risk, fit_slope, floor_risk, ClampedNet, SlopeAxis, SlopeFit};
use crate::error::{Error, Result};
use crate::estimators::{penalty_from_schedule, train_npdnn, train_spdnn, TrainConfig};
use crate::rng::derive_seed;
use crate::theory::{npdnn_schedule, predicted_rate, spdnn_schedule, ArchitectureSchedule, PredictedRate};

pub const CSV_HEADER: &str = "n,phi_n,rep,seed,excess_risk,se,floored,train_seconds";

/// Largest tolerated fraction of failed cells.
const MAX_FAILED_FRACTION: f64 = 0.2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellResult {
    pub n: u64,
    pub phi_n: f64,
    pub rep: usize,
    pub seed: u64,
    /// Floored estimate; `raw_excess_risk` keeps the Monte-Carlo value.
    pub excess_risk: f64,
    pub raw_excess_risk: f64,
    pub se: f64,
    pub floored: bool,
    pub train_seconds: f64,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NSummary {
    pub n: u64,
    pub phi_n: f64,
    pub median: f64,
    pub q1: f64,
    pub q3: f64,
    pub completed: usize,
    pub failed: usize,
    pub schedule: ArchitectureSchedule,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub cells: Vec<CellResult>,
    pub per_n: Vec<NSummary>,
    /// Fit of per-n medians; absent with fewer than 3 grid points.
    pub slope: Option<SlopeFit>,
    pub predicted: PredictedRate,
    pub synthetic: bool,
}

impl SweepResult {
    pub fn failed(&self) -> usize {
        self.cells.iter().filter(|c| c.error.is_some()).count()
    }

    pub fn summary_json(&self) -> Result<String> {
        #[derive(Serialize)]
        struct Summary<'a> {
            per_n: &'a [NSummary],
            slope: &'a Option<SlopeFit>,
            predicted: &'a PredictedRate,
            synthetic: bool,
            cells: usize,
            failed: usize,
            failures: Vec<(u64, usize, &'a str)>,
        }
        let failures = self
            .cells
            .iter()
            .filter_map(|c| c.error.as_deref().map(|e| (c.n, c.rep, e)))
            .collect();
        Ok(serde_json::to_string_pretty(&Summary {
            per_n: &self.per_n,
            slope: &self.slope,
            predicted: &self.predicted,
            synthetic: self.synthetic,
            cells: self.cells.len(),
            failed: self.failed(),
            failures,
        })?)
    }
}

pub fn write_sweep_csv(result: &SweepResult, mut out: impl Write) -> Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for c in result.cells.iter().filter(|c| c.error.is_none()) {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            c.n, c.phi_n, c.rep, c.seed, c.excess_risk, c.se, c.floored, c.train_seconds
        )?;
    }
    Ok(())
}

fn quantile(sorted: &[f64], q: f64) -> f64 {
    if sorted.is_empty() {
        return f64::NAN;
    }
    let pos = q * (sorted.len() - 1) as f64;
    let (lo, hi) = (pos.floor() as usize, pos.ceil() as usize);
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

fn schedule_for(cfg: &SweepConfig, n: u64) -> Result<ArchitectureSchedule> {
    let smooth = cfg.smoothness()?;
    match cfg.estimator.kind {
        EstimatorKind::Npdnn => npdnn_schedule(&cfg.theory, &smooth, &cfg.structure, n),
        EstimatorKind::Spdnn => spdnn_schedule(&cfg.theory, &smooth, &cfg.structure, n),
    }
}

struct Cell {
    n_index: usize,
    rep: usize,
    seed: u64,
}

fn run_cell(cfg: &SweepConfig, schedule: &ArchitectureSchedule, cell: &Cell, synthetic: Option<f64>) -> Result<(f64, f64, f64)> {
    let n = schedule.n;
    if let Some(e) = synthetic {
        let base = match cfg.grid.axis {
            SlopeAxis::RawN => n as f64,
            SlopeAxis::PhiN => schedule.phi,
        };
        return Ok((base.powf(e), 0.0, 0.0));
    }
    let model = cfg.target_model()?;
    let data = model.sample(n as usize, derive_seed(cell.seed, 0))?;
    let train = TrainConfig { seed: derive_seed(cell.seed, 1), ..cfg.estimator.train.clone() };
    let fit = match cfg.estimator.kind {
        EstimatorKind::Npdnn => train_npdnn(&data, schedule, &cfg.loss, &train)?,
        EstimatorKind::Spdnn => {
            let (mut pen, _) = penalty_from_schedule(cfg.penalty_kind(), schedule)?;
            pen.lambda *= cfg.estimator.lambda_scale;
            train_spdnn(&data, schedule, &cfg.loss, &pen, &train)?
        }
    };
    let mut h = ClampedNet::new(&fit.params, Some(schedule.output_bound));
    let r = estimate_excess_risk(&mut h, &model, &cfg.loss, cfg.grid.mc_size, derive_seed(cell.seed, 2))?;
    Ok((r.estimate, r.se, fit.seconds))
}

/// Runs every `(n, replication)` cell on `threads` workers (0: all cores).
///
/// Cells are seeded from `(cfg.seed, cell index)` and reported in grid order,
/// so the result does not depend on scheduling. In synthetic mode no model is
/// trained and each cell's risk is `n^e` (or `phi(n)^e` on the phi axis) with
/// `e` the configured or predicted exponent.
pub fn run_sweep(cfg: &SweepConfig, threads: usize, synthetic: bool) -> Result<SweepResult> {
    cfg.validate()?;
    let smooth = cfg.smoothness()?;
    let predicted = predicted_rate(&cfg.theory, &smooth, &cfg.structure)?;
    let exponent = synthetic.then(|| {
        cfg.grid.synthetic_exponent.unwrap_or(match cfg.grid.axis {
            SlopeAxis::RawN => predicted.n_exponent,
            SlopeAxis::PhiN => predicted.phi_exponent,
        })
    });
    let schedules: Vec<ArchitectureSchedule> = cfg.grid.n.iter().map(|n| schedule_for(cfg, *n)).collect::<Result<_>>()?;
    let reps = cfg.grid.replications;
    let cells: Vec<Cell> = (0..schedules.len() * reps)
        .map(|i| Cell { n_index: i / reps, rep: i % reps, seed: derive_seed(cfg.seed, i as u64) })
        .collect();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    let outcomes: Vec<Result<(f64, f64, f64)>> =
        pool.install(|| cells.par_iter().map(|c| run_cell(cfg, &schedules[c.n_index], c, exponent)).collect());

    let results: Vec<CellResult> = cells
        .iter()
        .zip(outcomes)
        .map(|(c, out)| {
            let s = &schedules[c.n_index];
            let mut cell = CellResult {
                n: s.n,
                phi_n: s.phi,
                rep: c.rep,
                seed: c.seed,
                excess_risk: f64::NAN,
                raw_excess_risk: f64::NAN,
                se: f64::NAN,
                floored: false,
                train_seconds: 0.0,
                error: None,
            };
            match out {
                Ok((risk, se, secs)) => {
                    let (v, floored) = floor_risk(risk, se);
                    cell.excess_risk = v;
                    cell.raw_excess_risk = risk;
                    cell.se = se;
                    cell.floored = floored;
                    if cfg.grid.record_timing {
                        cell.train_seconds = secs;
                    }
                }
                Err(e) => cell.error = Some(e.to_string()),
            }
            cell
        })
        .collect();

    let failed = results.iter().filter(|c| c.error.is_some()).count();
    if failed as f64 > MAX_FAILED_FRACTION * results.len() as f64 {
        return Err(Error::SweepFailed { failed, total: results.len() });
    }

    let per_n: Vec<NSummary> = schedules
        .iter()
        .enumerate()
        .map(|(k, s)| {
            let mut vals: Vec<f64> = results[k * reps..(k + 1) * reps]
                .iter()
                .filter(|c| c.error.is_none())
                .map(|c| c.excess_risk)
                .collect();
            vals.sort_by(f64::total_cmp);
            NSummary {
                n: s.n,
                phi_n: s.phi,
                median: quantile(&vals, 0.5),
                q1: quantile(&vals, 0.25),
                q3: quantile(&vals, 0.75),
                completed: vals.len(),
                failed: reps - vals.len(),
                schedule: s.clone(),
            }
        })
        .collect();

    let usable: Vec<&NSummary> = per_n.iter().filter(|s| s.completed > 0).collect();
    let slope = if usable.len() >= 3 {
        let ns: Vec<f64> = usable.iter().map(|s| s.n as f64).collect();
        let med: Vec<f64> = usable.iter().map(|s| s.median).collect();
        Some(fit_slope(&ns, &med, None, cfg.grid.axis, &cfg.structure)?)
    } else {
        None
    };
    Ok(SweepResult { cells: results, per_n, slope, predicted, synthetic })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(grid: &str, reps: usize) -> SweepConfig {
        SweepConfig::from_toml(&format!(
            r#"
seed = 11
[structure]
kind = "iid"
[model]
kind = "regression"
target = "square"
noise = {{ kind = "gaussian", sigma = 0.3 }}
[loss]
kind = "huber"
delta = 1.0
[estimator]
kind = "npdnn"
[estimator.train]
max_epochs = 5
[theory]
n0 = 2.0
s0 = 4.0
[grid]
n = {grid}
replications = {reps}
mc_size = 1000
axis = "raw_n"
"#
        ))
        .unwrap()
    }

    #[test]
    fn single_cell_has_no_slope() {
        let r = run_sweep(&config("[256]", 1), 1, false).unwrap();
        assert_eq!(r.cells.len(), 1);
        assert!(r.slope.is_none());
        assert!(r.cells[0].error.is_none());
    }

    #[test]
    fn synthetic_mode_recovers_exponent() {
        let r = run_sweep(&config("[256, 512, 1024, 2048, 4096]", 2), 2, true).unwrap();
        let slope = r.slope.unwrap().slope;
        assert!((slope - -0.8).abs() < 1e-9, "{slope}");
    }

    #[test]
    fn deterministic_across_thread_counts() {
        let cfg = config("[64, 128, 256]", 2);
        let a = run_sweep(&cfg, 1, false).unwrap();
        let b = run_sweep(&cfg, 3, false).unwrap();
        let (mut ca, mut cb) = (Vec::new(), Vec::new());
        write_sweep_csv(&a, &mut ca).unwrap();
        write_sweep_csv(&b, &mut cb).unwrap();
        assert_eq!(ca, cb);
        assert!(String::from_utf8(ca).unwrap().starts_with(CSV_HEADER));
        assert_eq!(a.summary_json().unwrap(), b.summary_json().unwrap());
    }

    #[test]
    fn quantiles() {
        assert_eq!(quantile(&[1.0, 2.0, 3.0, 4.0], 0.5), 2.5);
        assert_eq!(quantile(&[1.0, 2.0, 3.0], 0.25), 1.5);
    }
}
