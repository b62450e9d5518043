//! Monte-Carlo excess risk of shifted predictors and its standard error.

use depnet::datagen::{registered_target, Noise};
use depnet::experiment::{estimate_excess_risk, TargetModel};
use depnet::Loss;

fn main() -> depnet::Result<()> {
    let target = registered_target("square")?;
    let model = TargetModel::Regression { target: target.clone(), noise: Noise::Laplace { scale: 0.5 } };
    let loss = Loss::Huber { delta: 1.0 };
    for c in [0.0, 0.05, 0.2, 0.8] {
        for m in [2_000, 32_000] {
            let mut h = |x: &[f64]| target.eval(x) + c;
            let r = estimate_excess_risk(&mut h, &model, &loss, m, 7)?;
            println!("shift {c:<4}  M={m:>6}  excess {:>10.6}  se {:.2e}", r.estimate, r.se);
        }
    }
    Ok(())
}
