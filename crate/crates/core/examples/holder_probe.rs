//! Numeric Hölder-norm lower bounds for the registry and for a composition.

use std::sync::Arc;

use depnet::datagen::{build_composition_target, component, holder_quotient_probe, registry, ProbeConfig, TargetSpec};
use depnet::theory::{CompositionClass, HolderClass, Smoothness};

fn main() -> depnet::Result<()> {
    for t in registry() {
        let Smoothness::Holder(h) = t.smoothness() else { continue };
        let probe = holder_quotient_probe(&**t.func(), h.s, t.domain(), &ProbeConfig::default())?;
        println!("{:<9} s={:.1} d={}  declared K={:<5} probe={probe:.4}", t.id(), h.s, h.dim, h.radius);
    }

    // x -> x^3 has norm 1 + 3 + 6 = 10 for s = 2; declaring 8 is refused.
    let cube = |k| TargetSpec::holder("cube", HolderClass { s: 2.0, radius: k, dim: 1 }, Arc::new(|x: &[f64]| x[0].powi(3)));
    println!("\ncube with K=10: {}", cube(10.0).is_ok());
    println!("cube with K=8: {}", cube(8.0).unwrap_err());

    let class = CompositionClass::new(vec![2, 2, 1], vec![1, 2], vec![2.0, 0.5], 5.0)?;
    let h = build_composition_target(
        "two_layer",
        class.clone(),
        vec![vec![component("identity", &[0])?, component("square", &[1])?], vec![component("sum_sqrt", &[0, 1])?]],
    )?;
    println!(
        "\ncomposition: h(0.2, 0.7) = {:.4}, effective smoothness {:?}, rate exponent {:.4}",
        h.eval(&[0.2, 0.7]),
        class.effective_smoothness(),
        class.rate_exponent()
    );
    Ok(())
}
