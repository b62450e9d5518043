//! Architecture schedules and predicted rates across dependence structures.

use depnet::theory::{covering_log_bound, npdnn_schedule, predicted_rate, spdnn_schedule, HolderClass, Smoothness};
use depnet::{DependenceStructure, TheoryConfig};

fn main() -> depnet::Result<()> {
    let cfg = TheoryConfig::default();
    let class = Smoothness::Holder(HolderClass::new(2.0, 5.0, 1)?);
    let structures = [
        DependenceStructure::Iid,
        DependenceStructure::AlphaExp,
        DependenceStructure::AlphaSubexp { rho: 1.0 },
        DependenceStructure::CmixGeo { rho: 2.0 },
        DependenceStructure::CmixPoly { rho: 5.0 },
    ];
    println!("{:<14} {:>10} {:>3} {:>4} {:>5} {:>9} {:>8}", "structure", "phi(n)", "L", "N", "S", "n-exp", "log-pow");
    for st in &structures {
        let s = npdnn_schedule(&cfg, &class, st, 100_000)?;
        let r = predicted_rate(&cfg, &class, st)?;
        println!(
            "{:<14} {:>10.1} {:>3} {:>4} {:>5} {:>9.4} {:>8.2}",
            st.name(),
            s.phi,
            s.depth,
            s.width,
            s.sparsity.unwrap_or(0),
            r.n_exponent,
            r.log_power
        );
    }

    let sp = spdnn_schedule(&cfg, &class, &DependenceStructure::Iid, 100_000)?;
    println!("\nspdnn iid: lambda_n = {:.4e}, log tau_max = {:.2}", sp.lambda.unwrap(), sp.log_tau_max.unwrap());
    let s = npdnn_schedule(&cfg, &class, &DependenceStructure::Iid, 100_000)?;
    let cover = covering_log_bound(s.depth, s.width, s.param_bound, s.sparsity.unwrap(), 1.0, 1.0 / 100_000.0)?;
    println!("log covering number at eps = 1/n: {cover:.1}");
    Ok(())
}
