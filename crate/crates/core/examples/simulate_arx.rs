//! A nonlinear ARX process: contraction check, simulation, sample moments.

use depnet::datagen::{check_contraction, simulate_arx, ArxModel, Link, LinkTerm, Noise};

fn main() -> depnet::Result<()> {
    let mut model = ArxModel::ar1(0.0, 1.0);
    model.y_terms = vec![LinkTerm { link: Link::Tanh, coef: 0.6 }, LinkTerm { link: Link::Bump, coef: -0.3 }];
    model.x_terms = vec![LinkTerm::linear(0.5)];
    model.g_terms = vec![LinkTerm { link: Link::Tanh, coef: 0.4 }];
    model.noise_y = Noise::StudentT { df: 5.0, scale: 0.5 };

    let report = check_contraction(&model);
    println!("contraction: f sum {:.2}, g sum {:.2}, passed {}", report.f_sum, report.g_sum, report.passed());

    let data = simulate_arx(&model, 20_000, 2_000, 11)?;
    let y = data.responses();
    let n = y.len() as f64;
    let mean = y.iter().sum::<f64>() / n;
    let var = y.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    let acf = |k: usize| y.windows(k + 1).map(|w| (w[0] - mean) * (w[k] - mean)).sum::<f64>() / n / var;
    println!("X_t dimension {} (Y lags then exogenous lags)", data.dim());
    println!("mean {mean:.4}, variance {var:.4}, acf(1..4) = {:.3} {:.3} {:.3} {:.3}", acf(1), acf(2), acf(3), acf(4));

    let x = data.x(100);
    println!("row 100: X = {x:?}, Y = {:.4}, f(X) = {:.4}", data.y(100), model.f(x));

    // An explosive link sum is refused.
    let bad = ArxModel::ar1(1.1, 1.0);
    println!("a = 1.1: {}", simulate_arx(&bad, 10, 10, 0).unwrap_err());
    Ok(())
}
