//! Sparsity-constrained network on iid data with a Huber loss.

use depnet::datagen::{registered_target, simulate_iid, Noise};
use depnet::estimators::{train_npdnn, TrainConfig};
use depnet::experiment::{estimate_excess_risk, ClampedNet, TargetModel};
use depnet::net::count_nonzero;
use depnet::theory::npdnn_schedule;
use depnet::{DependenceStructure, Loss, TheoryConfig};

fn main() -> depnet::Result<()> {
    let target = registered_target("sine")?;
    let noise = Noise::Gaussian { sigma: 0.5 };
    let loss = Loss::Huber { delta: 1.0 };
    let theory = TheoryConfig { l0: 0.5, n0: 4.0, s0: 8.0, ..TheoryConfig::default() };
    let model = TargetModel::Regression { target: target.clone(), noise };

    for n in [256u64, 1024, 4096] {
        let sched = npdnn_schedule(&theory, target.smoothness(), &DependenceStructure::Iid, n)?;
        let data = simulate_iid(&target, &noise, n as usize, n)?;
        let cfg = TrainConfig { step_size: 0.2, shrink: 0.9, sparsity_warmup: 100, restarts: 2, ..TrainConfig::default() };
        let fit = train_npdnn(&data, &sched, &loss, &cfg)?;
        let risk = estimate_excess_risk(&mut ClampedNet::new(&fit.params, Some(sched.output_bound)), &model, &loss, 20_000, 1)?;
        println!(
            "n={n:>5}  L={} N={:>2} S={:>3}  nonzero={:>3}  train={:.4}  excess={:.2e} (se {:.1e})  {:.1}s",
            sched.depth,
            sched.width,
            sched.sparsity.unwrap(),
            count_nonzero(fit.params.theta()),
            fit.empirical_risk,
            risk.estimate,
            risk.se,
            fit.seconds
        );
    }
    Ok(())
}
