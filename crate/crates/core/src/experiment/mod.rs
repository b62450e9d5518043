//! Monte-Carlo excess risk, log-log rate fits and sample-size sweeps.

pub mod cli;
mod config;
mod sweep;

use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::datagen::{simulate_arx, simulate_classification, simulate_iid, ArxModel, Noise, TargetSpec};
use crate::error::{Error, Result};
use crate::loss::Loss;
use crate::net::{apply_clamp, NetworkParams, Workspace};
use crate::theory::DependenceStructure;

pub use config::{EstimatorSection, GridSection, ModelSection, SweepConfig};
pub use sweep::{run_sweep, write_sweep_csv, CellResult, NSummary, SweepResult, CSV_HEADER};

/// Floor for nonpositive risks without a usable standard error.
pub const RISK_EPS: f64 = 1e-12;

/// Data-generating process with a known target predictor `h*`.
#[derive(Debug, Clone)]
pub enum TargetModel {
    /// `Y = h*(X) + eps`, `X` uniform on the target's domain.
    Regression { target: TargetSpec, noise: Noise },
    /// Logistic link; `h*` is the log-odds.
    Classification { target: TargetSpec },
    /// `h* = f`; fresh draws continue a stationary path after `burn_in` steps.
    Arx { model: ArxModel, burn_in: usize },
}

impl TargetModel {
    pub fn dim(&self) -> usize {
        match self {
            TargetModel::Regression { target, .. } | TargetModel::Classification { target } => target.dim(),
            TargetModel::Arx { model, .. } => model.dim(),
        }
    }

    pub fn sample(&self, n: usize, seed: u64) -> Result<Dataset> {
        match self {
            TargetModel::Regression { target, noise } => simulate_iid(target, noise, n, seed),
            TargetModel::Classification { target } => simulate_classification(target, n, seed),
            TargetModel::Arx { model, burn_in } => simulate_arx(model, n, *burn_in, seed),
        }
    }

    pub fn h_star(&self, x: &[f64]) -> f64 {
        match self {
            TargetModel::Regression { target, .. } | TargetModel::Classification { target } => target.eval(x),
            TargetModel::Arx { model, .. } => model.f(x),
        }
    }
}

pub trait Predictor {
    fn predict(&mut self, x: &[f64]) -> Result<f64>;
}

impl<F: FnMut(&[f64]) -> f64> Predictor for F {
    fn predict(&mut self, x: &[f64]) -> Result<f64> {
        Ok(self(x))
    }
}

/// A network evaluated with its output clamped at `bound`.
pub struct ClampedNet<'a> {
    params: &'a NetworkParams,
    bound: Option<f64>,
    ws: Workspace,
}

impl<'a> ClampedNet<'a> {
    pub fn new(params: &'a NetworkParams, bound: Option<f64>) -> Self {
        Self { params, bound, ws: Workspace::new(params.arch()) }
    }
}

impl Predictor for ClampedNet<'_> {
    fn predict(&mut self, x: &[f64]) -> Result<f64> {
        if x.len() != self.params.arch().input_dim() {
            return Err(Error::Dimension { expected: self.params.arch().input_dim(), got: x.len() });
        }
        let raw = self.ws.forward(self.params.arch(), self.params.theta(), x)?;
        Ok(apply_clamp(raw, self.bound))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RiskEstimate {
    pub estimate: f64,
    pub se: f64,
}

/// `R(h) - R(h*)` from `m` fresh draws shared by `h` and `h*`; the standard
/// error is that of the paired differences (i.i.d. formula).
pub fn estimate_excess_risk(
    h: &mut dyn Predictor,
    model: &TargetModel,
    loss: &Loss,
    m: usize,
    seed: u64,
) -> Result<RiskEstimate> {
    if m < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 evaluation draws, got {m}")));
    }
    let draws = model.sample(m, seed)?;
    let mut diffs = Vec::with_capacity(m);
    for (x, y) in draws.iter() {
        let ours = loss.eval(h.predict(x)?, y)?;
        let best = loss.eval(model.h_star(x), y)?;
        diffs.push(ours - best);
    }
    let mean = diffs.iter().sum::<f64>() / m as f64;
    let var = diffs.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (m - 1) as f64;
    Ok(RiskEstimate { estimate: mean, se: (var / m as f64).sqrt() })
}

/// Horizontal axis of a rate fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum SlopeAxis {
    RawN,
    #[default]
    PhiN,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    pub slope_se: f64,
    pub axis: SlopeAxis,
    /// Points whose risk was floored before taking logs.
    pub floored: Vec<bool>,
}

/// Replaces a nonpositive risk by `max(se, RISK_EPS)`.
pub fn floor_risk(risk: f64, se: f64) -> (f64, bool) {
    if risk > 0.0 {
        (risk, false)
    } else {
        (se.max(RISK_EPS), true)
    }
}

/// Least squares of `log(risk)` on `log(n)` or `log(phi(n))`.
///
/// Needs at least 3 points with distinct abscissae. Nonpositive risks are
/// floored with [`floor_risk`] using `ses` when given.
pub fn fit_slope(
    ns: &[f64],
    risks: &[f64],
    ses: Option<&[f64]>,
    axis: SlopeAxis,
    structure: &DependenceStructure,
) -> Result<SlopeFit> {
    if ns.len() != risks.len() || ses.is_some_and(|s| s.len() != ns.len()) {
        return Err(Error::Shape(format!("{} sample sizes for {} risks", ns.len(), risks.len())));
    }
    if ns.len() < 3 {
        return Err(Error::InvalidArgument(format!("slope fit needs at least 3 points, got {}", ns.len())));
    }
    let mut xs = Vec::with_capacity(ns.len());
    for n in ns {
        let v = match axis {
            SlopeAxis::RawN => *n,
            SlopeAxis::PhiN => structure.phi(*n)?,
        };
        if !(v > 0.0) {
            return Err(Error::InvalidArgument(format!("abscissa {v} is not positive")));
        }
        xs.push(v.ln());
    }
    let (ys, floored): (Vec<f64>, Vec<bool>) = risks
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let (v, f) = floor_risk(*r, ses.map_or(0.0, |s| s[i]));
            (v.ln(), f)
        })
        .unzip();
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidArgument("slope fit needs distinct abscissae".into()));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    let slope_se = (rss / (k - 2.0) / sxx).sqrt();
    Ok(SlopeFit { slope, intercept, slope_se, axis, floored })
}
