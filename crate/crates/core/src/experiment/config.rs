//! TOML sweep configuration. Unknown keys are rejected.
//!
//! ```toml
//! seed = 7
//!
//! [structure]
//! kind = "iid"
//!
//! [model]
//! kind = "regression"          # regression | classification | arx
//! target = "sine"
//! noise = { kind = "gaussian", sigma = 0.5 }
//!
//! [loss]
//! kind = "huber"
//! delta = 1.0
//!
//! [estimator]
//! kind = "npdnn"               # npdnn | spdnn
//! [estimator.train]
//! max_epochs = 100
//!
//! [theory]
//! kappa = 2.0
//!
//! [grid]
//! n = [256, 512, 1024]
//! replications = 4
//! mc_size = 10000
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{SlopeAxis, TargetModel};
use crate::datagen::{check_contraction, registered_target, ArxModel, LinkTerm, Noise, DEFAULT_BURN_IN};
use crate::error::{Error, Result};
use crate::estimators::TrainConfig;
use crate::loss::Loss;
use crate::penalty::PenaltyKind;
use crate::theory::{DependenceStructure, HolderClass, Smoothness, TheoryConfig};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub seed: u64,
    pub structure: DependenceStructure,
    pub model: ModelSection,
    pub loss: Loss,
    pub estimator: EstimatorSection,
    #[serde(default)]
    pub theory: TheoryConfig,
    pub grid: GridSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelSection {
    Regression {
        target: String,
        noise: Noise,
    },
    Classification {
        target: String,
    },
    Arx {
        y_terms: Vec<LinkTerm>,
        #[serde(default)]
        x_terms: Vec<LinkTerm>,
        #[serde(default)]
        g_terms: Vec<LinkTerm>,
        noise_y: Noise,
        #[serde(default)]
        noise_x: Option<Noise>,
        #[serde(default = "default_burn_in")]
        burn_in: usize,
        /// Declared Hölder smoothness `(s, K)` of `f`.
        smoothness: ArxSmoothness,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArxSmoothness {
    pub s: f64,
    pub radius: f64,
}

fn default_burn_in() -> usize {
    DEFAULT_BURN_IN
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EstimatorSection {
    pub kind: EstimatorKind,
    /// SPDNN penalty shape; `lambda` and `tau` come from the theory tuning.
    #[serde(default)]
    pub penalty: Option<PenaltyKind>,
    /// Multiplies the tuned `lambda_n`.
    #[serde(default = "one")]
    pub lambda_scale: f64,
    #[serde(default)]
    pub train: TrainConfig,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimatorKind {
    Npdnn,
    Spdnn,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub n: Vec<u64>,
    pub replications: usize,
    pub mc_size: usize,
    #[serde(default)]
    pub axis: SlopeAxis,
    /// Record training wall time in the CSV (breaks byte-identical output).
    #[serde(default)]
    pub record_timing: bool,
    /// Exponent of `c n^e` or `c phi^e` used by synthetic mode; defaults to the predicted exponent.
    #[serde(default)]
    pub synthetic_exponent: Option<f64>,
}

impl SweepConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let mut cfg: SweepConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.theory.loss = cfg.loss;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text).map_err(|e| match e {
            Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        let g = &self.grid;
        if g.n.is_empty() || g.n.windows(2).any(|w| w[0] >= w[1]) {
            return bad(format!("grid.n must be nonempty and strictly increasing: {:?}", g.n));
        }
        if g.n[0] < 32 {
            return bad(format!("grid.n entries must be at least 32, got {}", g.n[0]));
        }
        if g.replications == 0 {
            return bad("grid.replications must be at least 1".into());
        }
        if g.mc_size < 1000 {
            return bad(format!("grid.mc_size must be at least 1000, got {}", g.mc_size));
        }
        if !(self.estimator.lambda_scale >= 0.0) {
            return bad("estimator.lambda_scale must be nonnegative".into());
        }
        let wrap = |e: Error| Error::Config(e.to_string());
        self.structure.validate().map_err(wrap)?;
        self.theory.validate().map_err(wrap)?;
        self.estimator.train.validate().map_err(wrap)?;
        if self.estimator.kind == EstimatorKind::Spdnn && self.loss.lipschitz().is_none() {
            return bad(format!("spdnn needs a Lipschitz loss, got {}", self.loss.name()));
        }
        if matches!(self.model, ModelSection::Classification { .. }) != matches!(self.loss, Loss::Logistic) {
            return bad("classification models go with the logistic loss and only with it".into());
        }
        self.target_model()?;
        Ok(())
    }

    pub fn target_model(&self) -> Result<TargetModel> {
        let wrap = |e: Error| Error::Config(e.to_string());
        Ok(match &self.model {
            ModelSection::Regression { target, noise } => {
                noise.validate().map_err(wrap)?;
                TargetModel::Regression { target: registered_target(target).map_err(wrap)?, noise: *noise }
            }
            ModelSection::Classification { target } => {
                TargetModel::Classification { target: registered_target(target).map_err(wrap)? }
            }
            ModelSection::Arx { burn_in, .. } => {
                let model = self.arx_model().expect("arx section");
                model.validate().map_err(wrap)?;
                let report = check_contraction(&model);
                if !report.passed() {
                    return Err(Error::Config(format!(
                        "model violates the contraction condition (f sum {}, g sum {})",
                        report.f_sum, report.g_sum
                    )));
                }
                TargetModel::Arx { model, burn_in: *burn_in }
            }
        })
    }

    pub fn smoothness(&self) -> Result<Smoothness> {
        Ok(match &self.model {
            ModelSection::Regression { target, .. } | ModelSection::Classification { target } => {
                registered_target(target)?.smoothness().clone()
            }
            ModelSection::Arx { smoothness, .. } => {
                let dim = self.arx_model().expect("arx section").dim().max(1);
                Smoothness::Holder(HolderClass::new(smoothness.s, smoothness.radius, dim)?)
            }
        })
    }

    fn arx_model(&self) -> Option<ArxModel> {
        let ModelSection::Arx { y_terms, x_terms, g_terms, noise_y, noise_x, .. } = &self.model else {
            return None;
        };
        let mut model = ArxModel::ar1(0.0, 1.0);
        model.y_terms = y_terms.clone();
        model.x_terms = x_terms.clone();
        model.g_terms = g_terms.clone();
        model.noise_y = *noise_y;
        if let Some(nx) = noise_x {
            model.noise_x = *nx;
        }
        Some(model)
    }

    pub fn penalty_kind(&self) -> PenaltyKind {
        self.estimator.penalty.unwrap_or(PenaltyKind::ClippedL1)
    }
}
