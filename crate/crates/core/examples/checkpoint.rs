//! Saving and reloading a trained network.

use depnet::datagen::{registered_target, simulate_iid, Noise};
use depnet::estimators::{train_npdnn, Checkpoint, TrainConfig};
use depnet::theory::npdnn_schedule;
use depnet::{ClassConstraints, DependenceStructure, Loss, TheoryConfig};

fn main() -> depnet::Result<()> {
    let target = registered_target("identity")?;
    let data = simulate_iid(&target, &Noise::Gaussian { sigma: 0.1 }, 200, 4)?;
    let theory = TheoryConfig { l0: 0.5, n0: 2.0, s0: 4.0, ..TheoryConfig::default() };
    let sched = npdnn_schedule(&theory, target.smoothness(), &DependenceStructure::Iid, 200)?;
    let fit = train_npdnn(&data, &sched, &Loss::Huber { delta: 1.0 }, &TrainConfig::default())?;

    let mut ckpt = Checkpoint::new(fit.params);
    ckpt.constraints = Some(ClassConstraints::new(sched.width, sched.param_bound, sched.output_bound, sched.sparsity)?);
    ckpt.metadata.insert("note".into(), serde_json::json!("identity target, n = 200"));
    let path = std::env::temp_dir().join("depnet-example.ckpt");
    ckpt.save(&path)?;

    let back = Checkpoint::load(&path)?;
    println!("{} bytes at {}", std::fs::metadata(&path)?.len(), path.display());
    println!("widths {:?}, admissible {}", back.params.arch().widths(), back.constraints.unwrap().admits(&back.params));
    for x in [0.1, 0.5, 0.9] {
        println!("h({x}) = {:.4}", back.params.forward(&[x], Some(sched.output_bound))?);
    }
    std::fs::remove_file(path)?;
    Ok(())
}
