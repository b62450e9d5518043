//! Self-check suites run by `depnet validate`.

use std::time::Instant;

use rand::Rng as _;
use serde::Serialize;

use crate::data::Dataset;
use crate::loss::Loss;
use crate::net::{Activation, Architecture, NetworkParams, Workspace};
use crate::penalty::{Penalty, PenaltyKind};
use crate::rng::{stream, Rng};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
    pub max_error: f64,
    pub seconds: f64,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

impl std::fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} {}: {} cases, {} failures, max error {:.3e}, {:.2}s",
            if self.passed() { "PASS" } else { "FAIL" },
            self.name,
            self.cases,
            self.failures,
            self.max_error,
            self.seconds
        )
    }
}

const SMOOTH_ACTIVATIONS: [Activation; 5] =
    [Activation::Relu, Activation::LeakyRelu, Activation::Tanh, Activation::Sigmoid, Activation::Softplus];

/// A random network and dataset whose pre-activations (for kinked
/// activations) and residuals (for the Huber loss) stay `margin` away from kinks.
pub fn random_gradient_instance(rng: &mut Rng, margin: f64) -> (NetworkParams, Dataset, Loss) {
    loop {
        let depth = rng.random_range(0..=3);
        let width = rng.random_range(1..=8);
        let dim = rng.random_range(1..=4);
        let act = SMOOTH_ACTIVATIONS[rng.random_range(0..SMOOTH_ACTIVATIONS.len())];
        let arch = Architecture::dense(dim, depth, width, act).expect("valid dense architecture");
        let theta: Vec<f64> = (0..arch.param_count()).map(|_| rng.random_range(-1.0..1.0)).collect();
        let params = NetworkParams::new(arch, theta).expect("finite parameters");
        let n = rng.random_range(1..=6);
        let x: Vec<f64> = (0..n * dim).map(|_| rng.random_range(-2.0..2.0)).collect();
        let loss = [Loss::Squared, Loss::Huber { delta: 0.5 }, Loss::Logistic][rng.random_range(0..3)];
        let y: Vec<f64> = (0..n)
            .map(|_| if loss == Loss::Logistic { [-1.0, 1.0][rng.random_range(0..2)] } else { rng.random_range(-2.0..2.0) })
            .collect();
        let data = Dataset::new(dim, x, y).expect("consistent shapes");
        if near_kink(&params, &data, &loss, margin) {
            continue;
        }
        return (params, data, loss);
    }
}

fn near_kink(params: &NetworkParams, data: &Dataset, loss: &Loss, margin: f64) -> bool {
    let kinked = matches!(params.arch().activation(), Activation::Relu | Activation::LeakyRelu);
    let mut ws = Workspace::new(params.arch());
    for (x, y) in data.iter() {
        let out = ws.forward(params.arch(), params.theta(), x).expect("finite");
        if kinked && ws.hidden_pre().any(|z| z.abs() < margin) {
            return true;
        }
        if let Loss::Huber { delta } = loss {
            if ((out - y).abs() - delta).abs() < margin {
                return true;
            }
        }
    }
    false
}

/// Largest relative gap `|g - fd| / max(|g|, |fd|, 1e-8)` between the reverse-mode
/// gradient and the fourth-order central difference with step `h`.
pub fn gradient_check(params: &NetworkParams, data: &Dataset, loss: &Loss, h: f64) -> f64 {
    let arch = params.arch();
    let (_, g) = params.loss_and_gradient(data, loss, None).expect("finite network");
    let mut ws = Workspace::new(arch);
    let mut theta = params.theta().to_vec();
    let mut worst = 0.0f64;
    for i in 0..theta.len() {
        let t0 = theta[i];
        let mut at = |t: f64| {
            theta[i] = t;
            ws.mean_loss(arch, &theta, data, loss, None).expect("finite")
        };
        let fd = (at(t0 - 2.0 * h) - 8.0 * at(t0 - h) + 8.0 * at(t0 + h) - at(t0 + 2.0 * h)) / (12.0 * h);
        theta[i] = t0;
        worst = worst.max((g[i] - fd).abs() / g[i].abs().max(fd.abs()).max(1e-8));
    }
    worst
}

/// Finite-difference step, and the distance from kinks it needs: the stencil
/// moves pre-activations by at most `2 h` times the incoming activations.
pub const GRADIENT_STEP: f64 = 1e-3;
pub const GRADIENT_MARGIN: f64 = 0.05;

pub fn gradient_suite(instances: usize, seed: u64) -> SuiteReport {
    let start = Instant::now();
    let mut rng = stream(seed, 0);
    let mut max_error = 0.0f64;
    let mut failures = 0;
    for _ in 0..instances {
        let (params, data, loss) = random_gradient_instance(&mut rng, GRADIENT_MARGIN);
        let e = gradient_check(&params, &data, &loss, GRADIENT_STEP);
        if !(e < 1e-4) {
            failures += 1;
        }
        max_error = max_error.max(e);
    }
    SuiteReport { name: "gradient", cases: instances, failures, max_error, seconds: start.elapsed().as_secs_f64() }
}

/// Every registered penalty on `cases` random `(lambda, tau)` pairs.
pub fn penalty_suite(cases: usize, grid: usize, seed: u64) -> SuiteReport {
    let start = Instant::now();
    let mut rng = stream(seed, 1);
    let mut failures = 0;
    let kinds = PenaltyKind::registered();
    for _ in 0..cases {
        let lambda = 10f64.powf(rng.random_range(-3.0..2.0));
        let tau = 10f64.powf(rng.random_range(-3.0..1.0));
        for kind in kinds {
            let p = Penalty::new(kind, lambda, tau).expect("valid parameters");
            if !p.validate(grid).passed() {
                failures += 1;
            }
        }
    }
    SuiteReport {
        name: "penalty",
        cases: cases * kinds.len(),
        failures,
        max_error: 0.0,
        seconds: start.elapsed().as_secs_f64(),
    }
}

/// Minimum of `(x - z)^2 / (2 eta) + pi(|x|)` over the points `k * step`
/// between 0 and `z`, where the minimizer always lies.
pub fn prox_grid_min(p: &Penalty, eta: f64, z: f64, step: f64) -> f64 {
    let (lo, hi) = if z >= 0.0 { (0.0, z) } else { (z, 0.0) };
    let (k0, k1) = ((lo / step).ceil() as i64, (hi / step).floor() as i64);
    let inv = 1.0 / (2.0 * eta);
    let slope = p.lambda / p.tau;
    let mut best = f64::INFINITY;
    for k in k0..=k1 {
        let x = k as f64 * step;
        let a = x.abs();
        let pen = if a > p.tau { p.lambda } else { slope * a };
        best = best.min((x - z) * (x - z) * inv + pen);
    }
    best
}

/// Closed-form clipped-L1 prox against [`prox_grid_min`].
pub fn prox_suite(cases: usize, step: f64, tol: f64, seed: u64) -> SuiteReport {
    let start = Instant::now();
    let mut rng = stream(seed, 2);
    let mut failures = 0;
    let mut max_error = 0.0f64;
    for _ in 0..cases {
        let lambda = rng.random_range(1e-3..2.0);
        let tau = rng.random_range(0.01..1.5);
        let eta = rng.random_range(0.01..1.0);
        let z = rng.random_range(-2.0..2.0);
        let p = Penalty::clipped_l1(lambda, tau).expect("valid parameters");
        let x = p.prox(eta, z).expect("positive step");
        let obj = (x - z) * (x - z) / (2.0 * eta) + p.total(&[x]);
        let gap = obj - prox_grid_min(&p, eta, z, step);
        max_error = max_error.max(gap);
        if gap >= tol {
            failures += 1;
        }
    }
    SuiteReport { name: "prox", cases, failures, max_error, seconds: start.elapsed().as_secs_f64() }
}

/// All suites; `quick` shrinks the prox suite to 1000 cases.
pub fn run_all(quick: bool, seed: u64) -> Vec<SuiteReport> {
    vec![
        gradient_suite(100, seed),
        penalty_suite(100, 1000, seed),
        prox_suite(if quick { 1000 } else { 10_000 }, 1e-6, 1e-9, seed),
    ]
}
