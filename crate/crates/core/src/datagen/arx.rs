use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::Noise;
use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::rng::rng_from_seed;

pub const DEFAULT_BURN_IN: usize = 1000;

/// Scalar link, each 1-Lipschitz.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Link {
    Linear,
    Tanh,
    /// `x exp(-x^2 / 2)`.
    Bump,
}

impl Link {
    #[inline]
    pub fn eval(self, x: f64) -> f64 {
        match self {
            Link::Linear => x,
            Link::Tanh => x.tanh(),
            Link::Bump => x * (-0.5 * x * x).exp(),
        }
    }

    pub fn lipschitz(self) -> f64 {
        1.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkTerm {
    pub link: Link,
    pub coef: f64,
}

impl LinkTerm {
    pub fn linear(coef: f64) -> Self {
        Self { link: Link::Linear, coef }
    }

    fn eval(&self, x: f64) -> f64 {
        self.coef * self.link.eval(x)
    }

    fn lipschitz(&self) -> f64 {
        self.coef.abs() * self.link.lipschitz()
    }
}

/// `Y_t = f(Y_{t-1..t-p}, Xc_{t-1..t-q}) + eps_t` and `Xc_t = g(Xc_{t-1..t-q}) + eta_t`
/// with additive `f` and `g` built from link terms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArxModel {
    /// Terms of `f` on the `p` response lags.
    pub y_terms: Vec<LinkTerm>,
    /// Terms of `f` on the `q` exogenous lags.
    #[serde(default)]
    pub x_terms: Vec<LinkTerm>,
    /// Terms of `g`, one per exogenous lag.
    #[serde(default)]
    pub g_terms: Vec<LinkTerm>,
    pub noise_y: Noise,
    #[serde(default = "default_noise_x")]
    pub noise_x: Noise,
}

fn default_noise_x() -> Noise {
    Noise::Gaussian { sigma: 1.0 }
}

impl ArxModel {
    /// `Y_t = a Y_{t-1} + eps_t`, `eps_t ~ N(0, sigma^2)`.
    pub fn ar1(a: f64, sigma: f64) -> Self {
        Self {
            y_terms: vec![LinkTerm::linear(a)],
            x_terms: vec![],
            g_terms: vec![],
            noise_y: Noise::Gaussian { sigma },
            noise_x: default_noise_x(),
        }
    }

    pub fn p(&self) -> usize {
        self.y_terms.len()
    }

    pub fn q(&self) -> usize {
        self.x_terms.len()
    }

    /// Dimension of `X_t`.
    pub fn dim(&self) -> usize {
        self.p() + self.q()
    }

    pub fn validate(&self) -> Result<()> {
        if self.g_terms.len() != self.x_terms.len() {
            return Err(Error::InvalidArgument(format!(
                "f reads {} exogenous lags but g has {} terms",
                self.x_terms.len(),
                self.g_terms.len()
            )));
        }
        if self.y_terms.iter().chain(&self.x_terms).chain(&self.g_terms).any(|t| !t.coef.is_finite()) {
            return Err(Error::InvalidArgument("non-finite link coefficient".into()));
        }
        self.noise_y.validate()?;
        self.noise_x.validate()
    }

    /// `f(x)` for `x = (Y lags, Xc lags)`; this is the regression target.
    pub fn f(&self, x: &[f64]) -> f64 {
        let (ys, xs) = x.split_at(self.p());
        self.y_terms.iter().zip(ys).map(|(t, v)| t.eval(*v)).sum::<f64>()
            + self.x_terms.iter().zip(xs).map(|(t, v)| t.eval(*v)).sum::<f64>()
    }

    fn g(&self, xs: &VecDeque<f64>) -> f64 {
        self.g_terms.iter().zip(xs).map(|(t, v)| t.eval(*v)).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContractionReport {
    pub f_sum: f64,
    pub g_sum: f64,
}

impl ContractionReport {
    pub fn f_margin(&self) -> f64 {
        1.0 - self.f_sum
    }

    pub fn g_margin(&self) -> f64 {
        1.0 - self.g_sum
    }

    pub fn passed(&self) -> bool {
        self.f_margin() > 0.0 && self.g_margin() > 0.0
    }
}

/// Sums of the Lipschitz coefficients of `f` in the response lags and of `g`.
pub fn check_contraction(model: &ArxModel) -> ContractionReport {
    ContractionReport {
        f_sum: model.y_terms.iter().map(LinkTerm::lipschitz).sum(),
        g_sum: model.g_terms.iter().map(LinkTerm::lipschitz).sum(),
    }
}

/// `n` consecutive observations `(X_t, Y_t)` after discarding `burn_in` steps
/// started from the zero state.
pub fn simulate_arx(model: &ArxModel, n: usize, burn_in: usize, seed: u64) -> Result<Dataset> {
    model.validate()?;
    let report = check_contraction(model);
    if !report.passed() {
        return Err(Error::Contraction(format!(
            "coefficient sums f: {}, g: {} (both must be below 1)",
            report.f_sum, report.g_sum
        )));
    }
    let (p, q) = (model.p(), model.q());
    let mut rng = rng_from_seed(seed);
    let mut ys: VecDeque<f64> = std::iter::repeat_n(0.0, p).collect();
    let mut xs: VecDeque<f64> = std::iter::repeat_n(0.0, q).collect();
    let mut data = Dataset::with_capacity(p + q, n);
    let mut state = vec![0.0; p + q];
    for t in 0..burn_in + n {
        for (dst, src) in state.iter_mut().zip(ys.iter().chain(xs.iter())) {
            *dst = *src;
        }
        let y = model.f(&state) + model.noise_y.sample(&mut rng);
        if q > 0 {
            let x = model.g(&xs) + model.noise_x.sample(&mut rng);
            xs.pop_back();
            xs.push_front(x);
        }
        if p > 0 {
            ys.pop_back();
            ys.push_front(y);
        }
        if t >= burn_in {
            data.push(&state, y);
        }
    }
    Ok(data)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn stats(v: &[f64]) -> (f64, f64) {
        let n = v.len() as f64;
        let m = v.iter().sum::<f64>() / n;
        (m, v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / n)
    }

    #[test]
    fn contraction_examples() {
        let model = ArxModel {
            y_terms: vec![LinkTerm::linear(0.5), LinkTerm { link: Link::Tanh, coef: -0.3 }],
            x_terms: vec![LinkTerm::linear(2.0)],
            g_terms: vec![LinkTerm { link: Link::Bump, coef: 0.4 }],
            noise_y: Noise::Gaussian { sigma: 1.0 },
            noise_x: Noise::Laplace { scale: 1.0 },
        };
        let r = check_contraction(&model);
        assert!(r.passed());
        assert!((r.f_margin() - 0.2).abs() < 1e-12 && (r.g_margin() - 0.6).abs() < 1e-12);

        let bad = ArxModel { y_terms: vec![LinkTerm::linear(0.7), LinkTerm::linear(0.4)], ..model };
        assert!(!check_contraction(&bad).passed());
        assert!(matches!(simulate_arx(&bad, 10, 0, 1), Err(Error::Contraction(_))));

        let noise = ArxModel { y_terms: vec![], ..ArxModel::ar1(0.0, 1.0) };
        assert!(check_contraction(&noise).passed());
    }

    #[test]
    fn ar1_stationary_variance_and_autocorrelation() {
        let d = simulate_arx(&ArxModel::ar1(0.5, 1.0), 100_000, 10_000, 11).unwrap();
        let y = d.responses();
        let (m, v) = stats(y);
        // Var of the sample variance for a Gaussian AR(1): 2 sigma_Y^4 (1 + a^2) / ((1 - a^2) n).
        let se_v = (2.0 * (4.0f64 / 3.0).powi(2) * 1.25 / 0.75 / 1e5).sqrt();
        assert!((v - 4.0 / 3.0).abs() < 3.0 * se_v, "var {v}");
        let r1 = y.windows(2).map(|w| (w[0] - m) * (w[1] - m)).sum::<f64>() / (y.len() as f64 * v);
        let se_r = ((1.0 - 0.25) / 1e5f64).sqrt();
        assert!((r1 - 0.5).abs() < 3.0 * se_r, "rho {r1}");
        for (i, (x, _)) in d.iter().enumerate().skip(1) {
            assert_eq!(x[0], y[i - 1]);
        }
    }

    #[test]
    fn zero_f_gives_iid_noise() {
        let model = ArxModel::ar1(0.0, 2.0);
        let d = simulate_arx(&model, 50, 5, 3).unwrap();
        let mut rng = rng_from_seed(3);
        let draws: Vec<f64> = (0..55).map(|_| model.noise_y.sample(&mut rng)).collect();
        assert_eq!(d.responses(), &draws[5..]);
    }

    #[test]
    fn deterministic_and_exogenous_layout() {
        let model = ArxModel {
            y_terms: vec![LinkTerm::linear(0.3), LinkTerm { link: Link::Tanh, coef: 0.2 }],
            x_terms: vec![LinkTerm { link: Link::Bump, coef: 1.0 }],
            g_terms: vec![LinkTerm::linear(0.5)],
            noise_y: Noise::StudentT { df: 5.0, scale: 0.5 },
            noise_x: Noise::Gaussian { sigma: 1.0 },
        };
        let a = simulate_arx(&model, 200, 100, 8).unwrap();
        assert_eq!(a, simulate_arx(&model, 200, 100, 8).unwrap());
        assert_eq!(a.dim(), 3);
        assert_eq!(a.len(), 200);
        for i in 1..a.len() {
            assert_eq!(a.x(i)[0], a.y(i - 1));
            assert_eq!(a.x(i)[1], a.x(i - 1)[0]);
        }
    }

    #[test]
    fn longer_burn_in_does_not_move_moments() {
        let model = ArxModel::ar1(0.5, 1.0);
        let a = simulate_arx(&model, 100_000, 1000, 21).unwrap();
        let b = simulate_arx(&model, 100_000, 20_000, 22).unwrap();
        let (ma, va) = stats(a.responses());
        let (mb, vb) = stats(b.responses());
        // Long-run variance of the mean is sigma^2 / (1 - a)^2 / n.
        let se_m = (4.0f64 / 1e5).sqrt() * 2f64.sqrt();
        let se_v = (2.0 * (4.0f64 / 3.0).powi(2) * 1.25 / 0.75 / 1e5).sqrt() * 2f64.sqrt();
        assert!((ma - mb).abs() < 3.0 * se_m);
        assert!((va - vb).abs() < 3.0 * se_v);
    }
}
