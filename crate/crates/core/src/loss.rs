//! Loss functions `l(y_pred, y)` with a.e. derivatives in `y_pred`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Loss {
    Squared,
    L1,
    Huber { delta: f64 },
    /// `log(1 + exp(-y * y_pred))` with labels `y` in `{-1, +1}`.
    Logistic,
}

impl Loss {
    pub fn huber(delta: f64) -> Result<Self> {
        if !(delta > 0.0) || !delta.is_finite() {
            return Err(Error::InvalidArgument(format!("huber delta must be positive, got {delta}")));
        }
        Ok(Loss::Huber { delta })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Loss::Squared => "squared",
            Loss::L1 => "l1",
            Loss::Huber { .. } => "huber",
            Loss::Logistic => "logistic",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Loss::Huber { delta } => Self::huber(delta).map(|_| ()),
            _ => Ok(()),
        }
    }

    #[inline]
    pub fn eval(&self, y_pred: f64, y: f64) -> Result<f64> {
        Ok(match *self {
            Loss::Squared => {
                let r = y_pred - y;
                r * r
            }
            Loss::L1 => (y_pred - y).abs(),
            Loss::Huber { delta } => {
                let r = (y_pred - y).abs();
                if r <= delta {
                    0.5 * r * r
                } else {
                    delta * r - 0.5 * delta * delta
                }
            }
            Loss::Logistic => {
                check_label(y)?;
                softplus(-y * y_pred)
            }
        })
    }

    /// Derivative in `y_pred`. At the Huber kink the quadratic branch is used;
    /// the L1 derivative at zero residual is 0.
    #[inline]
    pub fn grad(&self, y_pred: f64, y: f64) -> Result<f64> {
        Ok(match *self {
            Loss::Squared => 2.0 * (y_pred - y),
            Loss::L1 => sign(y_pred - y),
            Loss::Huber { delta } => {
                let r = y_pred - y;
                if r.abs() <= delta {
                    r
                } else {
                    delta * sign(r)
                }
            }
            Loss::Logistic => {
                check_label(y)?;
                -y / (1.0 + (y * y_pred).exp())
            }
        })
    }

    /// `K_l`, or `None` when the loss is not globally Lipschitz.
    pub fn lipschitz(&self) -> Option<f64> {
        match *self {
            Loss::Squared => None,
            Loss::L1 | Loss::Logistic => Some(1.0),
            Loss::Huber { delta } => Some(delta),
        }
    }
}

pub fn lipschitz_constant(loss: &Loss) -> Option<f64> {
    loss.lipschitz()
}

fn check_label(y: f64) -> Result<()> {
    if y == 1.0 || y == -1.0 {
        Ok(())
    } else {
        Err(Error::Label(y))
    }
}

#[inline]
fn sign(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// `log(1 + e^u)` without overflow.
#[inline]
pub(crate) fn softplus(u: f64) -> f64 {
    u.max(0.0) + (-u.abs()).exp().ln_1p()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn values() {
        let h = Loss::huber(1.0).unwrap();
        assert_eq!(h.eval(0.5, 0.0).unwrap(), 0.125);
        assert_eq!(h.eval(2.0, 0.0).unwrap(), 1.5);
        assert_eq!(Loss::L1.eval(1.0, 3.0).unwrap(), 2.0);
        assert!((Loss::Logistic.eval(0.0, 1.0).unwrap() - std::f64::consts::LN_2).abs() < 1e-15);
        assert!(Loss::Logistic.eval(0.0, 0.5).is_err());
        assert!(Loss::huber(0.0).is_err());
    }

    #[test]
    fn gradients() {
        let h = Loss::huber(1.0).unwrap();
        assert_eq!(h.grad(0.5, 0.0).unwrap(), 0.5);
        assert_eq!(h.grad(2.0, 0.0).unwrap(), 1.0);
        assert_eq!(h.grad(1.0, 0.0).unwrap(), 1.0);
        assert_eq!(h.grad(-1.0, 0.0).unwrap(), -1.0);
        assert_eq!(Loss::L1.grad(1.0, 3.0).unwrap(), -1.0);
        assert!(Loss::Logistic.grad(0.0, 2.0).is_err());
    }

    #[test]
    fn lipschitz_constants() {
        assert_eq!(Loss::L1.lipschitz(), Some(1.0));
        assert_eq!(Loss::huber(0.7).unwrap().lipschitz(), Some(0.7));
        assert_eq!(Loss::Logistic.lipschitz(), Some(1.0));
        assert_eq!(Loss::Squared.lipschitz(), None);
    }

    #[test]
    fn logistic_is_stable_far_out() {
        assert!((Loss::Logistic.eval(800.0, -1.0).unwrap() - 800.0).abs() < 1e-9);
        assert!(Loss::Logistic.eval(-800.0, -1.0).unwrap() < 1e-300);
        assert!((Loss::Logistic.grad(800.0, -1.0).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn huber_is_continuous_at_kink() {
        for delta in [0.1, 0.7, 1.0, 3.5] {
            let h = Loss::Huber { delta };
            let quad = 0.5 * delta * delta;
            let lin = delta * delta - 0.5 * delta * delta;
            assert!((quad - lin).abs() <= 1e-12);
            assert!((h.eval(delta, 0.0).unwrap() - quad).abs() <= 1e-12);
            assert!((h.eval(delta + 1e-13, 0.0).unwrap() - quad).abs() <= 1e-12);
        }
    }

    fn losses() -> Vec<Loss> {
        vec![Loss::L1, Loss::Huber { delta: 0.3 }, Loss::Huber { delta: 2.0 }, Loss::Logistic]
    }

    fn label(y: f64, loss: &Loss) -> f64 {
        if matches!(loss, Loss::Logistic) {
            if y >= 0.0 { 1.0 } else { -1.0 }
        } else {
            y
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]

        #[test]
        fn lipschitz_bound_holds(a in -20.0..20.0f64, b in -20.0..20.0f64, y in -5.0..5.0f64, k in 0usize..4) {
            let loss = losses()[k];
            let y = label(y, &loss);
            let gap = (loss.eval(a, y).unwrap() - loss.eval(b, y).unwrap()).abs();
            prop_assert!(gap <= loss.lipschitz().unwrap() * (a - b).abs() + 1e-12);
        }

        #[test]
        fn losses_are_nonnegative(a in -50.0..50.0f64, y in -5.0..5.0f64, k in 0usize..4) {
            let loss = losses()[k];
            prop_assert!(loss.eval(a, label(y, &loss)).unwrap() >= 0.0);
            prop_assert!(Loss::Squared.eval(a, y).unwrap() >= 0.0);
        }

        #[test]
        fn gradient_matches_finite_differences(a in -5.0..5.0f64, y in -3.0..3.0f64, k in 0usize..5) {
            let loss = if k == 4 { Loss::Squared } else { losses()[k] };
            let y = label(y, &loss);
            let kinks: Vec<f64> = match loss {
                Loss::L1 => vec![y],
                Loss::Huber { delta } => vec![y - delta, y + delta],
                _ => vec![],
            };
            prop_assume!(kinks.iter().all(|k| (a - k).abs() > 1e-3));
            let h = 1e-6;
            let fd = (loss.eval(a + h, y).unwrap() - loss.eval(a - h, y).unwrap()) / (2.0 * h);
            let g = loss.grad(a, y).unwrap();
            let rel = (g - fd).abs() / g.abs().max(fd.abs()).max(1.0);
            prop_assert!(rel < 1e-6, "grad {} fd {}", g, fd);
        }
    }
}
