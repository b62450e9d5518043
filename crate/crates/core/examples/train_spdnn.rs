//! Penalized network: every registered penalty with the tuned lambda_n, on
//! data from an ARX process.

use depnet::datagen::{simulate_arx, ArxModel, Link, LinkTerm};
use depnet::estimators::{penalty_from_schedule, train_spdnn, TrainConfig};
use depnet::theory::{spdnn_schedule, HolderClass, Smoothness};
use depnet::{DependenceStructure, Loss, PenaltyKind, TheoryConfig};

fn main() -> depnet::Result<()> {
    let mut model = ArxModel::ar1(0.0, 0.5);
    model.y_terms = vec![LinkTerm { link: Link::Tanh, coef: 0.8 }];
    let data = simulate_arx(&model, 1000, 500, 3)?;

    let loss = Loss::L1;
    let theory = TheoryConfig { loss, l0: 0.5, n0: 3.0, ..TheoryConfig::default() };
    let class = Smoothness::Holder(HolderClass::new(2.0, 2.0, 1)?);
    let sched = spdnn_schedule(&theory, &class, &DependenceStructure::AlphaExp, 1000)?;
    println!("phi(n) = {:.1}, lambda_n = {:.4}, log tau = {:.1}", sched.phi, sched.lambda.unwrap(), sched.log_tau_max.unwrap());

    for kind in PenaltyKind::registered() {
        let (mut pen, underflow) = penalty_from_schedule(kind, &sched)?;
        // The tuned lambda_n empties the network at this small n; scale it
        // down and use a coarse tau so the penalty shapes differ.
        pen.lambda *= 0.01;
        pen.tau = 0.5;
        let fit = train_spdnn(&data, &sched, &loss, &pen, &TrainConfig { max_epochs: 300, step_size: 0.5, ..TrainConfig::default() })?;
        let kept = fit.params.theta().iter().filter(|v| v.abs() > pen.tau).count();
        println!(
            "{:<10} risk {:.4}  penalty {:.4}  |theta| > tau: {:>3}/{}  steps {}  underflow {underflow}",
            kind.name(),
            fit.empirical_risk,
            fit.penalty.unwrap(),
            kept,
            fit.params.theta().len(),
            fit.trajectory.len() - 1
        );
    }
    Ok(())
}
