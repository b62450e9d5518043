//! Sparse penalties `pi_{lambda, tau}` and their proximal maps.
//!
//! Every penalty here satisfies
//!
//! * (i) `pi(0) = 0` and `pi` is non-decreasing on `[0, inf)`;
//! * (ii) `pi(x) = lambda` for every `x > tau`.
//!
//! The clipped L1 penalty `lambda * min(x / tau, 1)` is the reference member.
//! SCAD, MCP and the seamless-L0 penalty are registered in rescaled forms
//! whose plateau value `lambda` starts exactly at `tau`; their usual
//! parameterisations are an implementation choice and are documented on
//! [`PenaltyKind`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PenaltyKind {
    /// `lambda * min(x / tau, 1)`.
    ClippedL1,
    /// SCAD with shape `a > 2`: the standard form with threshold `tau / a`,
    /// scaled so that its plateau equals `lambda` from `tau` on.
    Scad { a: f64 },
    /// Minimax concave penalty with its concavity chosen so the plateau starts
    /// at `tau`: `lambda * (2u - u^2)` for `u = x / tau <= 1`.
    Mcp,
    /// Seamless L0 `log(1 + u / (u + gamma))`, normalised to `lambda` at
    /// `u = x / tau = 1` and capped there.
    SeamlessL0 { gamma: f64 },
}

impl PenaltyKind {
    pub fn name(&self) -> &'static str {
        match self {
            PenaltyKind::ClippedL1 => "clipped_l1",
            PenaltyKind::Scad { .. } => "scad",
            PenaltyKind::Mcp => "mcp",
            PenaltyKind::SeamlessL0 { .. } => "sel0",
        }
    }

    /// One instance of every registered kind with default shape parameters.
    pub fn registered() -> [PenaltyKind; 4] {
        [
            PenaltyKind::ClippedL1,
            PenaltyKind::Scad { a: 3.7 },
            PenaltyKind::Mcp,
            PenaltyKind::SeamlessL0 { gamma: 0.01 },
        ]
    }

    /// Unit-scale shape `u -> pi(u * tau) / lambda` on `u >= 0`.
    fn shape(&self, u: f64) -> f64 {
        if u >= 1.0 {
            return 1.0;
        }
        match *self {
            PenaltyKind::ClippedL1 => u,
            PenaltyKind::Scad { a } => {
                let l0 = 1.0 / a;
                let raw = if u <= l0 {
                    l0 * u
                } else {
                    (2.0 * a * l0 * u - u * u - l0 * l0) / (2.0 * (a - 1.0))
                };
                raw * 2.0 * a * a / (a + 1.0)
            }
            PenaltyKind::Mcp => 2.0 * u - u * u,
            PenaltyKind::SeamlessL0 { gamma } => {
                let raw = |v: f64| (v / (v + gamma)).ln_1p();
                (raw(u) / raw(1.0)).min(1.0)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Penalty {
    pub kind: PenaltyKind,
    pub lambda: f64,
    pub tau: f64,
}

impl Penalty {
    pub fn new(kind: PenaltyKind, lambda: f64, tau: f64) -> Result<Self> {
        if !(lambda >= 0.0) || !lambda.is_finite() || !(tau > 0.0) || !tau.is_finite() {
            return Err(Error::InvalidArgument(format!("penalty needs lambda >= 0 and tau > 0 (got {lambda}, {tau})")));
        }
        match kind {
            PenaltyKind::Scad { a } if !(a > 2.0) => {
                return Err(Error::InvalidArgument(format!("SCAD shape a must exceed 2, got {a}")))
            }
            PenaltyKind::SeamlessL0 { gamma } if !(gamma > 0.0) => {
                return Err(Error::InvalidArgument(format!("SELO gamma must be positive, got {gamma}")))
            }
            _ => {}
        }
        Ok(Self { kind, lambda, tau })
    }

    pub fn clipped_l1(lambda: f64, tau: f64) -> Result<Self> {
        Self::new(PenaltyKind::ClippedL1, lambda, tau)
    }

    /// `pi_{lambda, tau}(x)` for `x >= 0`.
    pub fn value(&self, x: f64) -> Result<f64> {
        if !(x >= 0.0) {
            return Err(Error::InvalidArgument(format!("penalty argument must be nonnegative, got {x}")));
        }
        Ok(self.value_abs(x))
    }

    #[inline]
    fn value_abs(&self, x: f64) -> f64 {
        if x > self.tau {
            self.lambda
        } else {
            self.lambda * self.kind.shape(x / self.tau)
        }
    }

    /// `J(theta) = sum_j pi(|theta_j|)`.
    pub fn total(&self, theta: &[f64]) -> f64 {
        theta.iter().map(|v| self.value_abs(v.abs())).sum()
    }

    pub fn validate(&self, grid: usize) -> PenaltyReport {
        validate_penalty_fn(|x| self.value_abs(x), self.lambda, self.tau, grid)
    }

    /// `argmin_x (x - z)^2 / (2 eta) + pi(|x|)`.
    ///
    /// Closed form for the clipped L1 penalty; other kinds return
    /// [`Error::Unsupported`] and should use [`Penalty::prox_numeric`].
    pub fn prox(&self, eta: f64, z: f64) -> Result<f64> {
        if !(eta > 0.0) {
            return Err(Error::InvalidArgument(format!("prox step must be positive, got {eta}")));
        }
        match self.kind {
            PenaltyKind::ClippedL1 => Ok(self.prox_clipped_l1(eta, z)),
            other => Err(Error::Unsupported(format!("closed-form prox for {}", other.name()))),
        }
    }

    fn prox_clipped_l1(&self, eta: f64, z: f64) -> f64 {
        let a = z.abs();
        let tau = self.tau;
        let objective = |x: f64| (x - a) * (x - a) / (2.0 * eta) + self.value_abs(x);
        // Linear piece on [0, tau]: soft threshold, clipped to the piece.
        let inner = (a - eta * self.lambda / tau).clamp(0.0, tau);
        // Flat piece on [tau, inf): z itself, or the boundary.
        let outer = a.max(tau);
        let best = if objective(inner) <= objective(outer) { inner } else { outer };
        if best == 0.0 { 0.0 } else { best.copysign(z) }
    }

    /// Prox for any kind by a grid over `[0, |z|]` followed by local refinement.
    pub fn prox_numeric(&self, eta: f64, z: f64, grid: usize) -> Result<f64> {
        if !(eta > 0.0) || grid < 2 {
            return Err(Error::InvalidArgument("prox_numeric needs eta > 0 and grid >= 2".into()));
        }
        let a = z.abs();
        if a == 0.0 {
            return Ok(0.0);
        }
        let objective = |x: f64| (x - a) * (x - a) / (2.0 * eta) + self.value_abs(x);
        let mut candidates = vec![0.0, a, self.tau.min(a)];
        let step = a / (grid - 1) as f64;
        let coarse = (0..grid)
            .map(|k| k as f64 * step)
            .min_by(|x, y| objective(*x).total_cmp(&objective(*y)))
            .unwrap();
        candidates.push(golden_section(&objective, (coarse - step).max(0.0), (coarse + step).min(a)));
        let best = candidates
            .into_iter()
            .min_by(|x, y| objective(*x).total_cmp(&objective(*y)).then(x.total_cmp(y)))
            .unwrap();
        Ok(if best == 0.0 { 0.0 } else { best.copysign(z) })
    }

    /// Prox used by the trainers: closed form when available.
    pub(crate) fn prox_any(&self, eta: f64, z: f64) -> f64 {
        match self.kind {
            PenaltyKind::ClippedL1 => self.prox_clipped_l1(eta, z),
            _ => self.prox_numeric(eta, z, 257).expect("eta checked by caller"),
        }
    }
}

fn golden_section(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..80 {
        let m1 = hi - r * (hi - lo);
        let m2 = lo + r * (hi - lo);
        if f(m1) <= f(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    0.5 * (lo + hi)
}

pub fn pi_eval(penalty: &Penalty, x: f64) -> Result<f64> {
    penalty.value(x)
}

pub fn penalty_total(penalty: &Penalty, theta: &[f64]) -> f64 {
    penalty.total(theta)
}

pub fn prox(penalty: &Penalty, eta: f64, z: f64) -> Result<f64> {
    penalty.prox(eta, z)
}

/// Outcome of checking conditions (i) and (ii) on a grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PenaltyReport {
    pub zero_at_zero: bool,
    pub monotone: bool,
    pub plateau: bool,
}

impl PenaltyReport {
    pub fn passed(&self) -> bool {
        self.zero_at_zero && self.monotone && self.plateau
    }

    /// Condition (i): zero at zero and non-decreasing.
    pub fn condition_i(&self) -> bool {
        self.zero_at_zero && self.monotone
    }

    /// Condition (ii): equal to lambda beyond tau.
    pub fn condition_ii(&self) -> bool {
        self.plateau
    }
}

/// Checks conditions (i)-(ii) for an arbitrary penalty function on `grid`
/// points spanning `[0, 4 tau]`.
pub fn validate_penalty_fn(pi: impl Fn(f64) -> f64, lambda: f64, tau: f64, grid: usize) -> PenaltyReport {
    let grid = grid.max(2);
    let tol = 1e-12 * lambda.max(1.0);
    let xs: Vec<f64> = (0..grid).map(|k| 4.0 * tau * k as f64 / (grid - 1) as f64).collect();
    let vals: Vec<f64> = xs.iter().map(|&x| pi(x)).collect();
    PenaltyReport {
        zero_at_zero: pi(0.0).abs() <= tol,
        monotone: vals.windows(2).all(|w| w[1] >= w[0] - tol),
        plateau: xs.iter().zip(&vals).filter(|(x, _)| **x > tau).all(|(_, v)| (v - lambda).abs() <= tol),
    }
}
