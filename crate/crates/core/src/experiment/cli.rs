//! `depnet` command line.
//!
//! Exit codes: 0 on success, 1 on usage or configuration errors, 2 on
//! runtime failures.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use super::config::{EstimatorKind, SweepConfig};
use super::{estimate_excess_risk, run_sweep, write_sweep_csv, ClampedNet};
use crate::datagen::write_dataset_csv;
use crate::error::{Error, Result};
use crate::estimators::{penalty_from_schedule, train_npdnn, train_spdnn, Checkpoint, TrainConfig};
use crate::loss::Loss;
use crate::net::ClassConstraints;
use crate::rng::derive_seed;
use crate::theory::{
    npdnn_schedule, predicted_rate, spdnn_schedule, ArchitectureSchedule, DependenceStructure, HolderClass,
    PredictedRate, Smoothness, TheoryConfig,
};
use crate::validate::run_all;

#[derive(Debug, Parser)]
#[command(name = "depnet", version, about = "Deep network estimators for dependent data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the architecture schedule and predicted rate.
    Schedule(ScheduleArgs),
    /// Simulate a training set and write it as CSV.
    Simulate(DataArgs),
    /// Fit one model; writes model.ckpt and metrics.json.
    Train(DataArgs),
    /// Run a sample-size sweep; writes sweep.csv and summary.json.
    Sweep(SweepArgs),
    /// Run the gradient, penalty and prox self-checks.
    Validate(ValidateArgs),
}

#[derive(Debug, Args)]
struct ScheduleArgs {
    /// Sweep config; its structure, model, theory and grid are used.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Sample size (default: the config grid, or 10000).
    #[arg(long)]
    n: Option<u64>,
    /// iid, phi_mixing, alpha_exp, alpha_subexp, cmix_geo or cmix_poly.
    #[arg(long, default_value = "iid")]
    structure: String,
    #[arg(long)]
    rho: Option<f64>,
    /// Hölder smoothness.
    #[arg(long, default_value_t = 2.0)]
    s: f64,
    #[arg(long, default_value_t = 1)]
    dim: usize,
    #[arg(long, default_value_t = 1.0)]
    radius: f64,
    #[arg(long, default_value_t = 2.0)]
    kappa: f64,
    /// squared, l1, huber or logistic.
    #[arg(long, default_value = "huber")]
    loss: String,
    #[arg(long)]
    spdnn: bool,
    /// Also write schedule.json here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct DataArgs {
    #[arg(long)]
    config: PathBuf,
    /// Sample size (default: first grid entry).
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory (simulate prints to stdout without it).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Worker threads, 0 for all cores.
    #[arg(long, default_value_t = 0)]
    threads: usize,
    #[arg(long)]
    seed: Option<u64>,
    /// Replace training by exact power-law risks.
    #[arg(long)]
    synthetic: bool,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    /// 1000 prox cases instead of 10000.
    #[arg(long)]
    quick: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn cli_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Config(_) => 1,
                _ => 2,
            }
        }
    }
}

fn run(command: Command) -> Result<i32> {
    match command {
        Command::Schedule(a) => schedule(a),
        Command::Simulate(a) => simulate(a),
        Command::Train(a) => train(a),
        Command::Sweep(a) => sweep(a),
        Command::Validate(a) => validate(a),
    }
}

fn load_config(path: &Path, seed: Option<u64>) -> Result<SweepConfig> {
    let mut cfg = SweepConfig::load(path)?;
    if let Some(s) = seed {
        cfg.seed = s;
    }
    Ok(cfg)
}

fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    Ok(())
}

fn parse_structure(kind: &str, rho: Option<f64>) -> Result<DependenceStructure> {
    let need = |name: &str| rho.ok_or_else(|| Error::Config(format!("--rho is required for {name}")));
    let s = match kind {
        "iid" => DependenceStructure::Iid,
        "phi_mixing" => DependenceStructure::PhiMixing,
        "alpha_exp" => DependenceStructure::AlphaExp,
        "alpha_subexp" => DependenceStructure::AlphaSubexp { rho: need(kind)? },
        "cmix_geo" => DependenceStructure::CmixGeo { rho: need(kind)? },
        "cmix_poly" => DependenceStructure::CmixPoly { rho: need(kind)? },
        other => return Err(Error::Config(format!("unknown structure `{other}`"))),
    };
    s.validate().map_err(|e| Error::Config(e.to_string()))?;
    Ok(s)
}

fn parse_loss(name: &str) -> Result<Loss> {
    Ok(match name {
        "squared" => Loss::Squared,
        "l1" => Loss::L1,
        "huber" => Loss::Huber { delta: 1.0 },
        "logistic" => Loss::Logistic,
        other => return Err(Error::Config(format!("unknown loss `{other}`"))),
    })
}

fn print_schedule(s: &ArchitectureSchedule, rate: &PredictedRate) -> Result<()> {
    let mut out = std::io::stdout().lock();
    writeln!(out, "n = {}", s.n)?;
    writeln!(out, "phi_n = {}", s.phi)?;
    writeln!(out, "depth = {}", s.depth)?;
    writeln!(out, "width = {}", s.width)?;
    writeln!(out, "param_bound = {}", s.param_bound)?;
    writeln!(out, "output_bound = {}", s.output_bound)?;
    match s.sparsity {
        Some(v) => writeln!(out, "sparsity = {v}")?,
        None => writeln!(out, "sparsity = none")?,
    }
    if let (Some(l), Some(t)) = (s.lambda, s.log_tau_max) {
        writeln!(out, "lambda = {l}")?;
        writeln!(out, "log_tau_max = {t}")?;
    }
    writeln!(out, "rate_exponent = {}", rate.n_exponent)?;
    writeln!(out, "rate_phi_exponent = {}", rate.phi_exponent)?;
    writeln!(out, "rate_log_power = {}", rate.log_power)?;
    writeln!(out, "json = {}", serde_json::to_string(&json!({ "schedule": s, "predicted": rate }))?)?;
    Ok(())
}

fn schedule(a: ScheduleArgs) -> Result<i32> {
    let (theory, smooth, structure, spdnn, ns) = match &a.config {
        Some(path) => {
            let cfg = load_config(path, None)?;
            let ns = a.n.map_or_else(|| cfg.grid.n.clone(), |n| vec![n]);
            (cfg.theory.clone(), cfg.smoothness()?, cfg.structure, cfg.estimator.kind == EstimatorKind::Spdnn, ns)
        }
        None => {
            let loss = parse_loss(&a.loss)?;
            let theory = TheoryConfig { kappa: a.kappa, loss, ..TheoryConfig::default() };
            theory.validate().map_err(|e| Error::Config(e.to_string()))?;
            let class = HolderClass::new(a.s, a.radius, a.dim).map_err(|e| Error::Config(e.to_string()))?;
            let structure = parse_structure(&a.structure, a.rho)?;
            (theory, Smoothness::Holder(class), structure, a.spdnn, vec![a.n.unwrap_or(10_000)])
        }
    };
    if ns.iter().any(|n| *n < 2) {
        return Err(Error::Config("--n must be at least 2".into()));
    }
    let rate = predicted_rate(&theory, &smooth, &structure)?;
    let mut all = Vec::new();
    for (i, n) in ns.iter().enumerate() {
        let s = if spdnn {
            spdnn_schedule(&theory, &smooth, &structure, *n)?
        } else {
            npdnn_schedule(&theory, &smooth, &structure, *n)?
        };
        if i > 0 {
            println!();
        }
        print_schedule(&s, &rate)?;
        all.push(s);
    }
    if let Some(dir) = a.out {
        ensure_dir(&dir)?;
        fs::write(dir.join("schedule.json"), serde_json::to_string_pretty(&json!({ "schedules": all, "predicted": rate }))?)?;
    }
    Ok(0)
}

fn sample_size(cfg: &SweepConfig, n: Option<u64>) -> Result<u64> {
    let n = n.unwrap_or(cfg.grid.n[0]);
    if n < 2 {
        return Err(Error::Config("--n must be at least 2".into()));
    }
    Ok(n)
}

fn simulate(a: DataArgs) -> Result<i32> {
    let cfg = load_config(&a.config, a.seed)?;
    let n = sample_size(&cfg, a.n)?;
    let data = cfg.target_model()?.sample(n as usize, derive_seed(cfg.seed, 0))?;
    match a.out {
        Some(dir) => {
            ensure_dir(&dir)?;
            let f = fs::File::create(dir.join("dataset.csv"))?;
            let mut w = std::io::BufWriter::new(f);
            write_dataset_csv(&data, &mut w)?;
            w.flush()?;
        }
        None => write_dataset_csv(&data, std::io::stdout().lock())?,
    }
    Ok(0)
}

fn train(a: DataArgs) -> Result<i32> {
    let cfg = load_config(&a.config, a.seed)?;
    let Some(dir) = a.out else {
        return Err(Error::Config("train needs --out".into()));
    };
    let n = sample_size(&cfg, a.n)?;
    let model = cfg.target_model()?;
    let smooth = cfg.smoothness()?;
    let data = model.sample(n as usize, derive_seed(cfg.seed, 0))?;
    let tc = TrainConfig { seed: derive_seed(cfg.seed, 1), ..cfg.estimator.train.clone() };
    let (schedule, fit) = match cfg.estimator.kind {
        EstimatorKind::Npdnn => {
            let s = npdnn_schedule(&cfg.theory, &smooth, &cfg.structure, n)?;
            let fit = train_npdnn(&data, &s, &cfg.loss, &tc)?;
            (s, fit)
        }
        EstimatorKind::Spdnn => {
            let s = spdnn_schedule(&cfg.theory, &smooth, &cfg.structure, n)?;
            let (mut pen, _) = penalty_from_schedule(cfg.penalty_kind(), &s)?;
            pen.lambda *= cfg.estimator.lambda_scale;
            let fit = train_spdnn(&data, &s, &cfg.loss, &pen, &tc)?;
            (s, fit)
        }
    };
    let risk = estimate_excess_risk(
        &mut ClampedNet::new(&fit.params, Some(schedule.output_bound)),
        &model,
        &cfg.loss,
        cfg.grid.mc_size,
        derive_seed(cfg.seed, 2),
    )?;
    ensure_dir(&dir)?;
    let mut ckpt = Checkpoint::new(fit.params.clone());
    ckpt.constraints = Some(ClassConstraints::new(
        schedule.width,
        schedule.param_bound,
        schedule.output_bound,
        schedule.sparsity,
    )?);
    ckpt.metadata.insert("n".into(), json!(n));
    ckpt.metadata.insert("seed".into(), json!(cfg.seed));
    ckpt.metadata.insert("loss".into(), json!(cfg.loss));
    ckpt.metadata.insert("estimator".into(), json!(cfg.estimator.kind));
    ckpt.metadata.insert("objective".into(), json!(fit.objective()));
    ckpt.save(dir.join("model.ckpt"))?;
    let metrics = json!({
        "n": n,
        "schedule": schedule,
        "empirical_risk": fit.empirical_risk,
        "penalty": fit.penalty,
        "excess_risk": risk.estimate,
        "excess_risk_se": risk.se,
        "trajectory": fit.trajectory,
        "restart": fit.restart,
        "warnings": fit.warnings,
        "train_seconds": fit.seconds,
    });
    fs::write(dir.join("metrics.json"), serde_json::to_string_pretty(&metrics)?)?;
    println!("empirical_risk = {}", fit.empirical_risk);
    println!("excess_risk = {} (se {})", risk.estimate, risk.se);
    Ok(0)
}

fn sweep(a: SweepArgs) -> Result<i32> {
    let cfg = load_config(&a.config, a.seed)?;
    let result = run_sweep(&cfg, a.threads, a.synthetic)?;
    ensure_dir(&a.out)?;
    let mut w = std::io::BufWriter::new(fs::File::create(a.out.join("sweep.csv"))?);
    write_sweep_csv(&result, &mut w)?;
    w.flush()?;
    fs::write(a.out.join("summary.json"), result.summary_json()?)?;
    for s in &result.per_n {
        println!("n = {:>6}  median = {:.6e}  iqr = [{:.3e}, {:.3e}]  failed = {}", s.n, s.median, s.q1, s.q3, s.failed);
    }
    match &result.slope {
        Some(f) => println!("slope = {:.6} (se {:.3e}); predicted {:.6}", f.slope, f.slope_se, result.predicted.n_exponent),
        None => println!("slope = none (fewer than 3 grid points)"),
    }
    Ok(0)
}

fn validate(a: ValidateArgs) -> Result<i32> {
    let reports = run_all(a.quick, a.seed);
    for r in &reports {
        println!("{r}");
    }
    if let Some(dir) = a.out {
        ensure_dir(&dir)?;
        fs::write(dir.join("validate.json"), serde_json::to_string_pretty(&reports)?)?;
    }
    Ok(if reports.iter().all(|r| r.passed()) { 0 } else { 2 })
}
