//! Small sample-size sweep with a log-log slope fit, then the same grid in
//! synthetic mode. Pass a config path to run that instead.

use depnet::experiment::{run_sweep, SweepConfig};

const SMALL: &str = r#"
seed = 1
[structure]
kind = "alpha_subexp"
rho = 2.0
[model]
kind = "regression"
target = "sine"
noise = { kind = "gaussian", sigma = 0.5 }
[loss]
kind = "huber"
delta = 1.0
[estimator]
kind = "npdnn"
[estimator.train]
step_size = 0.2
shrink = 0.9
sparsity_warmup = 60
max_epochs = 120
[theory]
l0 = 0.5
n0 = 4.0
s0 = 8.0
[grid]
n = [128, 256, 512, 1024]
replications = 5
mc_size = 5000
"#;

fn main() -> depnet::Result<()> {
    let cfg = match std::env::args().nth(1) {
        Some(path) => SweepConfig::load(path)?,
        None => SweepConfig::from_toml(SMALL)?,
    };
    for synthetic in [false, true] {
        let r = run_sweep(&cfg, 0, synthetic)?;
        println!("{}", if synthetic { "synthetic" } else { "trained" });
        for s in &r.per_n {
            println!("  n={:>5} phi={:>7.1}  median {:.3e}  [{:.3e}, {:.3e}]", s.n, s.phi_n, s.median, s.q1, s.q3);
        }
        if let Some(f) = &r.slope {
            println!("  slope {:.3} +- {:.3} on {:?}; predicted {:.3} in phi(n)", f.slope, f.slope_se, f.axis, r.predicted.phi_exponent);
        }
    }
    Ok(())
}
