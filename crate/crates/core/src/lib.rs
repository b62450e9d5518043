//! Deep neural network estimators for nonparametric regression and
//! classification from dependent observations.
//!
//! The crate bundles everything needed to fit and study two estimators:
//!
//! * the sparsity-constrained empirical risk minimizer ([`estimators::train_npdnn`]),
//!   fitted by projected minibatch gradient descent with hard thresholding;
//! * the sparse-penalized empirical risk minimizer ([`estimators::train_spdnn`]),
//!   fitted by full-batch proximal gradient with backtracking.
//!
//! [`theory`] turns a dependence structure, a smoothness class and a sample size
//! into architecture sizes, tuning parameters and predicted convergence rates.
//! [`datagen`] simulates i.i.d. regression, logistic classification and
//! autoregressive data with exogenous covariates, and [`experiment`] measures
//! excess risk by Monte Carlo and fits log-log rates over sample-size sweeps.
//!
//! See `examples/` for one runnable program per capability.

pub mod data;
pub mod datagen;
pub mod error;
pub mod estimators;
pub mod experiment;
pub mod loss;
pub mod net;
pub mod penalty;
pub mod rng;
pub mod theory;
pub mod validate;

pub use data::Dataset;
pub use error::{Error, Result};
pub use loss::Loss;
pub use net::{Activation, Architecture, ClassConstraints, NetworkParams};
pub use penalty::{Penalty, PenaltyKind};
pub use theory::{ArchitectureSchedule, DependenceStructure, TheoryConfig};
