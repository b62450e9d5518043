//! Trainers for the sparsity-constrained (NPDNN) and sparse-penalized
//! (SPDNN) estimators.
//!
//! Both return a feasible approximate minimizer; neither certifies global
//! optimality. `restarts` runs independent initializations and keeps the best.

mod checkpoint;
mod npdnn;
mod spdnn;

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::loss::Loss;
use crate::net::{project_in_place, Activation, Architecture, NetworkParams, Workspace};
use crate::rng::Rng;
use crate::theory::ArchitectureSchedule;

pub use checkpoint::{read_checkpoint, write_checkpoint, Checkpoint, CheckpointHeader, CHECKPOINT_MAGIC, CHECKPOINT_VERSION};
pub use npdnn::train_npdnn;
pub use spdnn::{penalty_from_schedule, train_spdnn};

/// Optimizer settings shared by both trainers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainConfig {
    pub max_epochs: usize,
    /// Minibatch size for NPDNN; SPDNN is always full batch.
    pub batch_size: usize,
    pub step_size: f64,
    /// Step multiplier on a worsening epoch (NPDNN) or a rejected step (SPDNN).
    pub shrink: f64,
    /// Gradient steps between projections (NPDNN).
    pub projection_every: usize,
    /// Half-width of the uniform initialization; `1/sqrt(fan_in)` when absent.
    pub init_scale: Option<f64>,
    pub seed: u64,
    /// Stop once the objective improves by less than `tol` (relative) in an epoch.
    pub tol: f64,
    pub restarts: usize,
    pub activation: Activation,
    /// NPDNN: epochs over which the kept-parameter budget shrinks from dense
    /// to `S_n` along a cubic schedule. Only iterates at the final budget can
    /// be returned.
    pub sparsity_warmup: usize,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            max_epochs: 200,
            batch_size: 32,
            step_size: 0.05,
            shrink: 0.5,
            projection_every: 1,
            init_scale: None,
            seed: 0,
            tol: 1e-9,
            restarts: 1,
            activation: Activation::Relu,
            sparsity_warmup: 0,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        let scale_ok = self.init_scale.is_none_or(|s| s > 0.0 && s.is_finite());
        if self.max_epochs == 0
            || self.batch_size == 0
            || !(self.step_size > 0.0)
            || !(self.shrink > 0.0 && self.shrink < 1.0)
            || self.projection_every == 0
            || !scale_ok
            || !(self.tol >= 0.0)
            || self.restarts == 0
            || self.sparsity_warmup >= self.max_epochs
        {
            return Err(Error::InvalidArgument(format!("invalid training config: {self:?}")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstraintFlags {
    pub within_bound: bool,
    /// `None` when the class has no sparsity budget.
    pub within_sparsity: Option<bool>,
    pub output_bound: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub params: NetworkParams,
    /// Objective of the current iterate, starting with the initial point.
    /// NPDNN records one value per epoch, SPDNN one per accepted step.
    pub trajectory: Vec<f64>,
    /// Running minimum of `trajectory`.
    pub best_trajectory: Vec<f64>,
    pub empirical_risk: f64,
    /// `J(theta)` for SPDNN.
    pub penalty: Option<f64>,
    pub constraints: ConstraintFlags,
    pub seconds: f64,
    pub warnings: Vec<String>,
    /// Restart that produced `params`.
    pub restart: usize,
}

impl FitResult {
    pub fn objective(&self) -> f64 {
        self.empirical_risk + self.penalty.unwrap_or(0.0)
    }
}

/// `(1/n) sum l(h(X_i), Y_i)` with the output clamped at `clamp`.
pub fn empirical_risk(params: &NetworkParams, data: &Dataset, loss: &Loss, clamp: Option<f64>) -> Result<f64> {
    if data.dim() != params.arch().input_dim() {
        return Err(Error::Dimension { expected: params.arch().input_dim(), got: data.dim() });
    }
    Workspace::new(params.arch()).mean_loss(params.arch(), params.theta(), data, loss, clamp)
}

pub(crate) fn check_schedule(schedule: &ArchitectureSchedule, data: &Dataset) -> Result<()> {
    if data.is_empty() {
        return Err(Error::InvalidArgument("training data is empty".into()));
    }
    if schedule.width == 0 || !(schedule.param_bound > 0.0) || !(schedule.output_bound > 0.0) {
        return Err(Error::InvalidArgument(format!("unusable schedule {schedule:?}")));
    }
    Ok(())
}

pub(crate) fn schedule_arch(schedule: &ArchitectureSchedule, input_dim: usize, act: Activation) -> Result<Architecture> {
    Architecture::dense(input_dim, schedule.depth, schedule.width, act)
}

/// Uniform draw per layer scaled by fan-in, then projected to the class.
pub(crate) fn initialize(
    arch: &Architecture,
    cfg: &TrainConfig,
    bound: f64,
    sparsity: Option<usize>,
    rng: &mut Rng,
) -> Vec<f64> {
    let mut theta = Vec::with_capacity(arch.param_count());
    for w in arch.widths().windows(2) {
        let scale = cfg.init_scale.unwrap_or(1.0 / (w[0] as f64).sqrt());
        for _ in 0..w[1] * (w[0] + 1) {
            theta.push(rng.random_range(-scale..=scale));
        }
    }
    project_in_place(&mut theta, bound, sparsity);
    theta
}

pub(crate) fn running_min(v: &[f64]) -> Vec<f64> {
    let mut best = f64::INFINITY;
    v.iter()
        .map(|x| {
            best = best.min(*x);
            best
        })
        .collect()
}

#[cfg(test)]
pub(crate) fn test_schedule(depth: usize, width: usize, b: f64, f: f64, s: Option<usize>) -> ArchitectureSchedule {
    ArchitectureSchedule {
        n: 0,
        phi: 0.0,
        depth,
        width,
        param_bound: b,
        output_bound: f,
        sparsity: s,
        raw: crate::theory::RawSchedule { depth: depth as f64, width: width as f64, sparsity: s.map(|v| v as f64) },
        lambda: None,
        log_tau_max: None,
    }
}
