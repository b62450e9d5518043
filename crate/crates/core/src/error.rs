use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid architecture: {0}")]
    Architecture(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("non-finite value encountered in layer {layer}")]
    NonFinite { layer: usize },

    #[error("label {0} is not in {{-1, +1}}")]
    Label(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("loss `{0}` has no finite Lipschitz constant")]
    UnboundedLoss(&'static str),

    #[error("contraction condition violated: {0}")]
    Contraction(String),

    #[error("training diverged after {} epochs (objective {last:.3e})", trajectory.len())]
    Diverged { trajectory: Vec<f64>, last: f64 },

    #[error("backtracking exhausted after {0} step halvings")]
    Backtracking(usize),

    #[error("registration failed for `{id}`: {reason}")]
    Registration { id: String, reason: String },

    #[error("config error: {0}")]
    Config(String),

    #[error("checkpoint error: {0}")]
    Checkpoint(String),

    #[error("sweep failed: {failed} of {total} cells errored")]
    SweepFailed { failed: usize, total: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
