//! Data simulators and target-function registries.
//!
//! All generators are deterministic in their seed. Samples come back as
//! [`Dataset`]s with row-major covariates.

mod arx;
mod holder;
mod targets;

use std::io::Write;

use rand::Rng as _;
use rand_distr::{Distribution, Normal, StudentT};
use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::rng::{Rng, rng_from_seed};

pub use arx::{check_contraction, simulate_arx, ArxModel, ContractionReport, Link, LinkTerm, DEFAULT_BURN_IN};
pub use holder::{floor_strict, holder_quotient_probe, pair_quotient, ProbeConfig};
pub use targets::{
    build_composition_target, component, registered_target, registry, ComponentFn, TargetFn, TargetSpec,
};

/// Zero-mean, symmetric noise with a finite second moment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Noise {
    Gaussian { sigma: f64 },
    Laplace { scale: f64 },
    /// `scale * T_df` with `df > 2`.
    StudentT { df: f64, scale: f64 },
}

impl Noise {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            Noise::Gaussian { sigma } => sigma >= 0.0 && sigma.is_finite(),
            Noise::Laplace { scale } => scale >= 0.0 && scale.is_finite(),
            Noise::StudentT { df, scale } => df > 2.0 && df.is_finite() && scale >= 0.0 && scale.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!("invalid noise spec {self:?}")))
        }
    }

    pub fn variance(&self) -> f64 {
        match *self {
            Noise::Gaussian { sigma } => sigma * sigma,
            Noise::Laplace { scale } => 2.0 * scale * scale,
            Noise::StudentT { df, scale } => scale * scale * df / (df - 2.0),
        }
    }

    pub fn sample(&self, rng: &mut Rng) -> f64 {
        match *self {
            Noise::Gaussian { sigma } => {
                if sigma == 0.0 {
                    0.0
                } else {
                    sigma * Normal::new(0.0, 1.0).unwrap().sample(rng)
                }
            }
            Noise::Laplace { scale } => {
                // Inverse CDF on (-1/2, 1/2).
                let u: f64 = rng.random::<f64>() - 0.5;
                -scale * u.signum() * (1.0 - 2.0 * u.abs()).ln()
            }
            Noise::StudentT { df, scale } => {
                if scale == 0.0 {
                    0.0
                } else {
                    scale * StudentT::new(df).unwrap().sample(rng)
                }
            }
        }
    }
}

/// `n` i.i.d. draws `(X, h*(X) + eps)` with `X` uniform on the target's domain.
pub fn simulate_iid(target: &TargetSpec, noise: &Noise, n: usize, seed: u64) -> Result<Dataset> {
    noise.validate()?;
    let mut rng = rng_from_seed(seed);
    let mut data = Dataset::with_capacity(target.dim(), n);
    let mut x = vec![0.0; target.dim()];
    for _ in 0..n {
        target.sample_input(&mut rng, &mut x);
        let y = target.eval(&x) + noise.sample(&mut rng);
        data.push(&x, y);
    }
    Ok(data)
}

/// `n` draws `(X, Y)` with `Y` in `{-1, +1}` and `P(Y = 1 | X) = 1 / (1 + exp(-h*(X)))`.
pub fn simulate_classification(target: &TargetSpec, n: usize, seed: u64) -> Result<Dataset> {
    let mut rng = rng_from_seed(seed);
    let mut data = Dataset::with_capacity(target.dim(), n);
    let mut x = vec![0.0; target.dim()];
    for _ in 0..n {
        target.sample_input(&mut rng, &mut x);
        let p = 1.0 / (1.0 + (-target.eval(&x)).exp());
        let y = if rng.random::<f64>() < p { 1.0 } else { -1.0 };
        data.push(&x, y);
    }
    Ok(data)
}

/// Writes `t,X_1,...,X_d,Y` with `t` counting from 1.
pub fn write_dataset_csv(data: &Dataset, mut out: impl Write) -> Result<()> {
    let mut header = String::from("t");
    for j in 1..=data.dim() {
        header.push_str(&format!(",X_{j}"));
    }
    writeln!(out, "{header},Y")?;
    for (t, (x, y)) in data.iter().enumerate() {
        let mut line = (t + 1).to_string();
        for v in x {
            line.push(',');
            line.push_str(&v.to_string());
        }
        writeln!(out, "{line},{y}")?;
    }
    Ok(())
}
