use std::time::Instant;

use rand::seq::SliceRandom;

use super::{check_schedule, initialize, running_min, schedule_arch, ConstraintFlags, FitResult, TrainConfig};
use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::loss::Loss;
use crate::net::{count_nonzero, project_in_place, sup_norm, NetworkParams, Workspace};
use crate::rng::stream;
use crate::theory::ArchitectureSchedule;

const DIVERGENCE_FACTOR: f64 = 1e6;

struct Run {
    theta: Vec<f64>,
    objective: f64,
    trajectory: Vec<f64>,
}

/// Projected minibatch gradient descent over `H(L_n, N_n, B_n, F_n, S_n)`.
///
/// The step is multiplied by `shrink` after an epoch that worsens the
/// objective. The returned iterate is the best projected epoch-end point.
pub fn train_npdnn(data: &Dataset, schedule: &ArchitectureSchedule, loss: &Loss, cfg: &TrainConfig) -> Result<FitResult> {
    cfg.validate()?;
    loss.validate()?;
    check_schedule(schedule, data)?;
    let start = Instant::now();
    let arch = schedule_arch(schedule, data.dim(), cfg.activation)?;
    let (bound, sparsity, clamp) = (schedule.param_bound, schedule.sparsity, Some(schedule.output_bound));

    let mut best: Option<(usize, Run)> = None;
    for r in 0..cfg.restarts {
        let mut rng = stream(cfg.seed, r as u64);
        let theta0 = initialize(&arch, cfg, bound, sparsity, &mut rng);
        let mut ws = Workspace::new(&arch);
        let mut theta = theta0;
        let mut grad = vec![0.0; theta.len()];
        let initial = ws.mean_loss(&arch, &theta, data, loss, clamp)?;
        let limit = DIVERGENCE_FACTOR * initial.max(1e-12);
        let mut run = Run { theta: theta.clone(), objective: initial, trajectory: vec![initial] };
        let mut order: Vec<usize> = (0..data.len()).collect();
        let mut step = cfg.step_size;
        let mut prev = initial;
        let mut steps = 0usize;
        for epoch in 0..cfg.max_epochs {
            let budget = warmup_budget(sparsity, theta.len(), epoch, cfg.sparsity_warmup);
            let settled = budget == sparsity;
            order.shuffle(&mut rng);
            for batch in order.chunks(cfg.batch_size) {
                let ok = ws.loss_and_gradient(&arch, &theta, data, batch.iter().copied(), loss, clamp, &mut grad);
                if let Err(e) = ok {
                    return Err(diverged(e, &run.trajectory));
                }
                for (t, g) in theta.iter_mut().zip(&grad) {
                    *t -= step * g;
                }
                steps += 1;
                if steps % cfg.projection_every == 0 {
                    project_in_place(&mut theta, bound, budget);
                }
            }
            project_in_place(&mut theta, bound, budget);
            let obj = match ws.mean_loss(&arch, &theta, data, loss, clamp) {
                Ok(v) => v,
                Err(e) => return Err(diverged(e, &run.trajectory)),
            };
            run.trajectory.push(obj);
            if !obj.is_finite() || obj > limit {
                return Err(Error::Diverged { trajectory: run.trajectory, last: obj });
            }
            if !settled {
                prev = obj;
                continue;
            }
            if obj < run.objective {
                run.objective = obj;
                run.theta.copy_from_slice(&theta);
            }
            if obj > prev {
                step *= cfg.shrink;
            } else if prev - obj <= cfg.tol * prev.abs() {
                break;
            }
            prev = obj;
        }
        if best.as_ref().is_none_or(|(_, b)| run.objective < b.objective) {
            best = Some((r, run));
        }
    }
    let (restart, run) = best.expect("at least one restart");
    let params = NetworkParams::new(arch, run.theta)?;
    Ok(FitResult {
        constraints: ConstraintFlags {
            within_bound: sup_norm(params.theta()) <= bound,
            within_sparsity: sparsity.map(|s| count_nonzero(params.theta()) <= s),
            output_bound: schedule.output_bound,
        },
        params,
        best_trajectory: running_min(&run.trajectory),
        trajectory: run.trajectory,
        empirical_risk: run.objective,
        penalty: None,
        seconds: start.elapsed().as_secs_f64(),
        warnings: vec![],
        restart,
    })
}

/// Kept-parameter budget for `epoch`: `S + (P - S) (1 - (epoch + 1) / warmup)^3`,
/// reaching `S` at epoch `warmup - 1`.
fn warmup_budget(sparsity: Option<usize>, total: usize, epoch: usize, warmup: usize) -> Option<usize> {
    let s = sparsity?;
    if epoch + 1 >= warmup || s >= total {
        return Some(s);
    }
    let frac = 1.0 - (epoch + 1) as f64 / warmup as f64;
    Some(s + ((total - s) as f64 * frac.powi(3)).floor() as usize)
}

fn diverged(e: Error, trajectory: &[f64]) -> Error {
    match e {
        Error::NonFinite { .. } => Error::Diverged { trajectory: trajectory.to_vec(), last: f64::INFINITY },
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datagen::{simulate_iid, Noise, TargetSpec};
    use crate::net::Activation;
    use crate::estimators::test_schedule as schedule;
    use std::sync::Arc;

    fn linear_data(n: usize, seed: u64) -> (Dataset, f64) {
        let line = crate::theory::HolderClass { s: 1.5, radius: 2.0, dim: 1 };
        let t = TargetSpec::holder("half", line, Arc::new(|x: &[f64]| 0.5 * x[0])).unwrap();
        let d = simulate_iid(&t, &Noise::Gaussian { sigma: 0.1 }, n, seed).unwrap();
        // Least-squares residual risk.
        let (xs, ys): (Vec<f64>, Vec<f64>) = d.iter().map(|(x, y)| (x[0], y)).unzip();
        let m = n as f64;
        let (mx, my) = (xs.iter().sum::<f64>() / m, ys.iter().sum::<f64>() / m);
        let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
        let slope = sxy / sxx;
        let icpt = my - slope * mx;
        let rss = xs.iter().zip(&ys).map(|(x, y)| (y - icpt - slope * x).powi(2)).sum::<f64>() / m;
        (d, rss)
    }

    #[test]
    fn matches_least_squares_on_linear_data() {
        let (data, ols) = linear_data(500, 1);
        let cfg = TrainConfig { max_epochs: 300, step_size: 0.05, batch_size: 16, restarts: 2, ..Default::default() };
        let fit = train_npdnn(&data, &schedule(1, 8, 10.0, 10.0, Some(40)), &Loss::Squared, &cfg).unwrap();
        assert!(fit.empirical_risk <= 1.5 * ols, "{} vs ols {}", fit.empirical_risk, ols);
    }

    #[test]
    fn output_is_feasible() {
        let (data, _) = linear_data(200, 2);
        for s in [1, 5, 17] {
            let sched = schedule(2, 6, 0.3, 0.2, Some(s));
            let fit = train_npdnn(&data, &sched, &Loss::Huber { delta: 1.0 }, &TrainConfig { max_epochs: 20, ..Default::default() })
                .unwrap();
            assert!(count_nonzero(fit.params.theta()) <= s);
            assert!(sup_norm(fit.params.theta()) <= 0.3);
            assert_eq!(fit.constraints.within_sparsity, Some(true));
            for (x, _) in data.iter() {
                assert!(fit.params.forward(x, Some(0.2)).unwrap().abs() <= 0.2);
            }
            assert!(fit.best_trajectory.windows(2).all(|w| w[1] <= w[0]));
        }
    }

    #[test]
    fn deterministic_given_seed() {
        let (data, _) = linear_data(100, 3);
        let cfg = TrainConfig { max_epochs: 10, restarts: 2, activation: Activation::Tanh, ..Default::default() };
        let s = schedule(2, 4, 5.0, 5.0, Some(12));
        let a = train_npdnn(&data, &s, &Loss::L1, &cfg).unwrap();
        let b = train_npdnn(&data, &s, &Loss::L1, &cfg).unwrap();
        assert_eq!(a.params, b.params);
        assert_eq!(a.trajectory, b.trajectory);
    }

    #[test]
    fn divergence_is_reported() {
        let (data, _) = linear_data(50, 4);
        let big = Dataset::new(1, data.x(0).iter().cycle().take(50).map(|v| v * 1e3).collect(), vec![1e3; 50]).unwrap();
        let cfg = TrainConfig { step_size: 1e3, max_epochs: 50, init_scale: Some(3.0), ..Default::default() };
        let r = train_npdnn(&big, &schedule(3, 8, 1e300, 1e300, None), &Loss::Squared, &cfg);
        assert!(matches!(r, Err(Error::Diverged { .. })), "{r:?}");
    }
}
