//! Numeric lower bound on the Hölder norm
//! `sum_{|a| < s} sup |D^a f| + sum_{|a| = floor(s)} sup |D^a f(x) - D^a f(y)| / |x - y|^(s - floor(s))`
//! where `floor(s)` is the largest integer strictly below `s`.

use rand::Rng as _;

use crate::error::{Error, Result};
use crate::rng::rng_from_seed;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeConfig {
    /// Points per axis of the sup-norm grid.
    pub grid: usize,
    /// Random pairs for the quotient term.
    pub pairs: usize,
    /// Finite-difference step.
    pub step: f64,
    pub seed: u64,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        Self { grid: 101, pairs: 20_000, step: 1e-4, seed: 0x5EED }
    }
}

/// Largest integer strictly smaller than `s`.
pub fn floor_strict(s: f64) -> usize {
    (s.ceil() - 1.0).max(0.0) as usize
}

fn derivative(f: &dyn Fn(&[f64]) -> f64, x: &mut [f64], alpha: &mut [usize], h: f64) -> f64 {
    let Some(k) = alpha.iter().position(|a| *a > 0) else {
        return f(x);
    };
    alpha[k] -= 1;
    let x0 = x[k];
    x[k] = x0 + h;
    let up = derivative(f, x, alpha, h);
    x[k] = x0 - h;
    let down = derivative(f, x, alpha, h);
    x[k] = x0;
    alpha[k] += 1;
    (up - down) / (2.0 * h)
}

fn multi_indices(dim: usize, order: usize) -> Vec<Vec<usize>> {
    if dim == 0 {
        return if order == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 0..=order {
        for mut rest in multi_indices(dim - 1, order - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// `|D^a f(x) - D^a f(y)| / |x - y|^(s - floor(s))` with Euclidean `|.|`.
pub fn pair_quotient(f: &dyn Fn(&[f64]) -> f64, alpha: &[usize], s: f64, x: &[f64], y: &[f64], step: f64) -> f64 {
    let dist = x.iter().zip(y).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
    if dist == 0.0 {
        return 0.0;
    }
    let mut a = alpha.to_vec();
    let fx = derivative(f, &mut x.to_vec(), &mut a, step);
    let fy = derivative(f, &mut y.to_vec(), &mut a, step);
    (fx - fy).abs() / dist.powf(s - floor_strict(s) as f64)
}

/// Sampled lower bound on the Hölder-`s` norm of `f` over the box `domain`.
///
/// `f` is evaluated up to `floor(s) * step` outside the box by the central
/// differences.
pub fn holder_quotient_probe(f: &dyn Fn(&[f64]) -> f64, s: f64, domain: &[(f64, f64)], cfg: &ProbeConfig) -> Result<f64> {
    if !(s > 0.0) || domain.is_empty() || domain.iter().any(|(a, b)| !(a < b)) || cfg.grid < 2 {
        return Err(Error::InvalidArgument(format!("bad probe arguments: s={s}, domain={domain:?}")));
    }
    let d = domain.len();
    let m = floor_strict(s);
    let mut rng = rng_from_seed(cfg.seed);

    // Points for the sup norms: the full tensor grid when small, random otherwise.
    let per_axis = if (cfg.grid as f64).powi(d as i32) <= 200_000.0 { cfg.grid } else { 0 };
    let mut points: Vec<Vec<f64>> = Vec::new();
    if per_axis > 0 {
        let total = per_axis.pow(d as u32);
        for idx in 0..total {
            let mut rem = idx;
            points.push(
                domain
                    .iter()
                    .map(|(a, b)| {
                        let k = rem % per_axis;
                        rem /= per_axis;
                        a + (b - a) * k as f64 / (per_axis - 1) as f64
                    })
                    .collect(),
            );
        }
    } else {
        for _ in 0..200_000 {
            points.push(domain.iter().map(|(a, b)| rng.random_range(*a..=*b)).collect());
        }
    }

    let mut total = 0.0;
    for order in 0..=m {
        for alpha in multi_indices(d, order) {
            let mut a = alpha.clone();
            let sup = points
                .iter()
                .map(|p| derivative(f, &mut p.clone(), &mut a, cfg.step).abs())
                .fold(0.0, f64::max);
            total += sup;
        }
    }

    // Differences of finite-difference derivatives carry rounding of order
    // eps / step, so pairs closer than sqrt(step) would inflate the quotient.
    let min_scale = if m == 0 { -6.0 } else { cfg.step.sqrt().log10() };
    let min_dist = 10f64.powf(min_scale);
    for alpha in multi_indices(d, m) {
        let mut best = 0.0f64;
        for i in 0..cfg.pairs {
            let x: Vec<f64> = domain.iter().map(|(a, b)| rng.random_range(*a..=*b)).collect();
            // Alternate far pairs with pairs at a random scale around x.
            let y: Vec<f64> = if i % 2 == 0 {
                domain.iter().map(|(a, b)| rng.random_range(*a..=*b)).collect()
            } else {
                let scale = 10f64.powf(rng.random_range(min_scale..0.0));
                x.iter()
                    .zip(domain)
                    .map(|(v, (a, b))| (v + scale * (b - a) * rng.random_range(-1.0..1.0)).clamp(*a, *b))
                    .collect()
            };
            // Clamping at the boundary can leave pairs closer than the floor.
            let dist = x.iter().zip(&y).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
            if dist >= min_dist {
                best = best.max(pair_quotient(f, &alpha, s, &x, &y, cfg.step));
            }
        }
        // Grid neighbours along each axis.
        for p in points.iter().take(20_000) {
            for k in 0..d {
                let mut q = p.clone();
                let h = (domain[k].1 - domain[k].0) / (cfg.grid - 1) as f64;
                q[k] = (q[k] + h).min(domain[k].1);
                best = best.max(pair_quotient(f, &alpha, s, p, &q, cfg.step));
            }
        }
        total += best;
    }
    Ok(total)
}
