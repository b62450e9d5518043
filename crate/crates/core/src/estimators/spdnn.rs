use std::time::Instant;

use super::{check_schedule, initialize, running_min, schedule_arch, ConstraintFlags, FitResult, TrainConfig};
use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::loss::Loss;
use crate::net::{sup_norm, NetworkParams, Workspace};
use crate::penalty::{Penalty, PenaltyKind};
use crate::rng::stream;
use crate::theory::{tau_from_log, ArchitectureSchedule};

const MAX_HALVINGS: usize = 60;

/// Penalty with `lambda_n` and `tau_n` taken from a tuned schedule. The flag
/// reports that `tau_max` underflowed and was replaced by the smallest
/// positive normal float.
pub fn penalty_from_schedule(kind: PenaltyKind, schedule: &ArchitectureSchedule) -> Result<(Penalty, bool)> {
    let (Some(lambda), Some(log_tau)) = (schedule.lambda, schedule.log_tau_max) else {
        return Err(Error::InvalidArgument("schedule carries no SPDNN tuning".into()));
    };
    let (tau, underflow) = tau_from_log(log_tau);
    Ok((Penalty::new(kind, lambda, tau)?, underflow))
}

/// Full-batch proximal gradient on `R_n(theta) + J(theta)` over
/// `H(L_n, N_n, B_n, F_n)`.
///
/// Each step tries `eta`, halving it (by `shrink`) until the composite
/// objective does not increase; the next step starts from `eta / shrink`,
/// capped at `step_size`. Iterates are clipped to `[-B_n, B_n]`.
pub fn train_spdnn(
    data: &Dataset,
    schedule: &ArchitectureSchedule,
    loss: &Loss,
    penalty: &Penalty,
    cfg: &TrainConfig,
) -> Result<FitResult> {
    cfg.validate()?;
    loss.validate()?;
    check_schedule(schedule, data)?;
    if loss.lipschitz().is_none() {
        return Err(Error::UnboundedLoss(loss.name()));
    }
    let report = penalty.validate(1000);
    if !report.passed() {
        return Err(Error::InvalidArgument(format!("penalty fails its conditions: {report:?}")));
    }
    let start = Instant::now();
    let arch = schedule_arch(schedule, data.dim(), cfg.activation)?;
    let (bound, clamp) = (schedule.param_bound, Some(schedule.output_bound));
    let mut warnings = Vec::new();
    if penalty.tau == f64::MIN_POSITIVE {
        warnings.push("tau_n underflowed; using the smallest positive normal float".to_string());
    }

    let mut best: Option<(usize, f64, Vec<f64>, Vec<f64>)> = None;
    for r in 0..cfg.restarts {
        let mut rng = stream(cfg.seed, r as u64);
        let mut theta = initialize(&arch, cfg, bound, None, &mut rng);
        let mut ws = Workspace::new(&arch);
        let mut grad = vec![0.0; theta.len()];
        let mut candidate = vec![0.0; theta.len()];
        let risk = ws.loss_and_gradient(&arch, &theta, data, 0..data.len(), loss, clamp, &mut grad)?;
        let mut objective = risk + penalty.total(&theta);
        let mut trajectory = vec![objective];
        let mut eta = cfg.step_size;
        for _ in 0..cfg.max_epochs {
            let mut halvings = 0;
            let accepted = loop {
                for ((c, t), g) in candidate.iter_mut().zip(&theta).zip(&grad) {
                    *c = penalty.prox_any(eta, t - eta * g).clamp(-bound, bound);
                }
                let cand_risk = ws.mean_loss(&arch, &candidate, data, loss, clamp);
                if let Ok(v) = cand_risk {
                    let obj = v + penalty.total(&candidate);
                    if obj <= objective {
                        break obj;
                    }
                }
                halvings += 1;
                if halvings > MAX_HALVINGS {
                    return Err(Error::Backtracking(MAX_HALVINGS));
                }
                eta *= cfg.shrink;
            };
            let moved = candidate != theta;
            std::mem::swap(&mut theta, &mut candidate);
            let prev = objective;
            objective = accepted;
            trajectory.push(objective);
            if !moved || prev - objective <= cfg.tol * prev.abs() {
                break;
            }
            ws.loss_and_gradient(&arch, &theta, data, 0..data.len(), loss, clamp, &mut grad)?;
            eta = (eta / cfg.shrink).min(cfg.step_size);
        }
        if best.as_ref().is_none_or(|b| objective < b.1) {
            best = Some((r, objective, theta, trajectory));
        }
    }
    let (restart, objective, theta, trajectory) = best.expect("at least one restart");
    let params = NetworkParams::new(arch, theta)?;
    let pen = penalty.total(params.theta());
    Ok(FitResult {
        constraints: ConstraintFlags {
            within_bound: sup_norm(params.theta()) <= bound,
            within_sparsity: None,
            output_bound: schedule.output_bound,
        },
        params,
        best_trajectory: running_min(&trajectory),
        trajectory,
        empirical_risk: objective - pen,
        penalty: Some(pen),
        seconds: start.elapsed().as_secs_f64(),
        warnings,
        restart,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datagen::{registered_target, simulate_iid, Noise};
    use crate::estimators::test_schedule as schedule;

    fn data(n: usize, seed: u64) -> Dataset {
        simulate_iid(&registered_target("sine").unwrap(), &Noise::Gaussian { sigma: 0.3 }, n, seed).unwrap()
    }

    #[test]
    fn zero_lambda_is_plain_gradient_descent() {
        let d = data(64, 1);
        let sched = schedule(1, 5, 1e9, 1e9, None);
        let cfg = TrainConfig { max_epochs: 25, step_size: 0.5, tol: 0.0, ..Default::default() };
        let fit = train_spdnn(&d, &sched, &Loss::Huber { delta: 1.0 }, &Penalty::clipped_l1(0.0, 1.0).unwrap(), &cfg).unwrap();

        // Reference: gradient descent with the same acceptance rule.
        let arch = schedule_arch(&sched, 1, cfg.activation).unwrap();
        let mut theta = initialize(&arch, &cfg, 1e9, None, &mut stream(cfg.seed, 0));
        let mut ws = Workspace::new(&arch);
        let mut grad = vec![0.0; theta.len()];
        let loss = Loss::Huber { delta: 1.0 };
        let mut obj = ws.loss_and_gradient(&arch, &theta, &d, 0..d.len(), &loss, Some(1e9), &mut grad).unwrap();
        let mut traj = vec![obj];
        let mut eta = cfg.step_size;
        for _ in 0..cfg.max_epochs {
            let (cand, v) = loop {
                let c: Vec<f64> = theta.iter().zip(&grad).map(|(t, g)| t - eta * g).collect();
                let v = ws.mean_loss(&arch, &c, &d, &loss, Some(1e9)).unwrap();
                if v <= obj {
                    break (c, v);
                }
                eta *= cfg.shrink;
            };
            let moved = cand != theta;
            theta = cand;
            let prev = obj;
            obj = v;
            traj.push(obj);
            if !moved || prev - obj <= 0.0 {
                break;
            }
            ws.loss_and_gradient(&arch, &theta, &d, 0..d.len(), &loss, Some(1e9), &mut grad).unwrap();
            eta = (eta / cfg.shrink).min(cfg.step_size);
        }
        assert_eq!(fit.trajectory, traj);
        assert_eq!(fit.params.theta(), &theta[..]);
    }

    #[test]
    fn dominant_penalty_gives_zero_network() {
        let d = data(64, 2);
        let pen = Penalty::clipped_l1(1e6, 1e3).unwrap();
        let fit = train_spdnn(&d, &schedule(2, 4, 10.0, 10.0, None), &Loss::L1, &pen, &TrainConfig::default()).unwrap();
        assert!(fit.params.theta().iter().all(|v| *v == 0.0));
        assert_eq!(fit.penalty, Some(0.0));
    }

    #[test]
    fn composite_objective_never_increases() {
        for seed in 0..4 {
            let d = data(80, 10 + seed);
            let pen = Penalty::clipped_l1(0.01, 0.05).unwrap();
            let cfg = TrainConfig { max_epochs: 60, seed, step_size: 1.0, ..Default::default() };
            let fit = train_spdnn(&d, &schedule(2, 6, 3.0, 2.0, None), &Loss::Huber { delta: 1.0 }, &pen, &cfg).unwrap();
            assert!(fit.trajectory.windows(2).all(|w| w[1] <= w[0] + 1e-12));
            assert!(fit.constraints.within_bound);
            let again = train_spdnn(&d, &schedule(2, 6, 3.0, 2.0, None), &Loss::Huber { delta: 1.0 }, &pen, &cfg).unwrap();
            assert_eq!(fit.params, again.params);
        }
    }

    #[test]
    fn other_penalties_train() {
        let d = data(50, 3);
        for kind in PenaltyKind::registered() {
            let pen = Penalty::new(kind, 0.01, 0.1).unwrap();
            let cfg = TrainConfig { max_epochs: 10, ..Default::default() };
            let fit = train_spdnn(&d, &schedule(1, 4, 2.0, 2.0, None), &Loss::L1, &pen, &cfg).unwrap();
            assert!(fit.trajectory.windows(2).all(|w| w[1] <= w[0]));
        }
    }

    #[test]
    fn squared_loss_is_rejected_and_tau_underflow_warns() {
        let d = data(20, 4);
        let pen = Penalty::clipped_l1(0.1, 0.1).unwrap();
        let r = train_spdnn(&d, &schedule(1, 2, 1.0, 1.0, None), &Loss::Squared, &pen, &TrainConfig::default());
        assert!(matches!(r, Err(Error::UnboundedLoss(_))));

        let mut sched = schedule(1, 2, 1.0, 1.0, None);
        sched.lambda = Some(0.1);
        sched.log_tau_max = Some(-2000.0);
        let (pen, underflow) = penalty_from_schedule(PenaltyKind::ClippedL1, &sched).unwrap();
        assert!(underflow);
        let cfg = TrainConfig { max_epochs: 3, ..Default::default() };
        let fit = train_spdnn(&d, &sched, &Loss::L1, &pen, &cfg).unwrap();
        assert_eq!(fit.warnings.len(), 1);
    }
}
