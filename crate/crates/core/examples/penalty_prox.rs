//! Penalty shapes and their proximal maps.

use depnet::{Penalty, PenaltyKind};

fn main() -> depnet::Result<()> {
    let (lambda, tau, eta) = (1.0, 0.5, 0.2);
    let xs = [0.0, 0.1, 0.25, 0.4, 0.5, 1.0];
    print!("{:<11}", "pi(x)");
    for x in xs {
        print!("{x:>8.2}");
    }
    println!();
    for kind in PenaltyKind::registered() {
        let p = Penalty::new(kind, lambda, tau)?;
        print!("{:<11}", kind.name());
        for x in xs {
            print!("{:>8.4}", p.value(x)?);
        }
        println!("   conditions hold: {}", p.validate(1000).passed());
    }

    println!("\nprox with eta = {eta}:");
    let p = Penalty::clipped_l1(lambda, tau)?;
    for z in [-1.5, -0.6, -0.2, 0.1, 0.3, 0.6, 0.8, 1.5] {
        let closed = p.prox(eta, z)?;
        let numeric = p.prox_numeric(eta, z, 200_000)?;
        println!("  z = {z:>5.2}  closed form {closed:>8.5}  grid {numeric:>8.5}");
    }
    Ok(())
}
