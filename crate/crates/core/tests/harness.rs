use depnet::datagen::{registered_target, Noise};
use depnet::experiment::{estimate_excess_risk, fit_slope, floor_risk, SlopeAxis, TargetModel};
use depnet::loss::Loss;
use depnet::theory::DependenceStructure;

/// Composite Simpson rule on `[a, b]` with `m` (even) panels.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, m: usize) -> f64 {
    let h = (b - a) / m as f64;
    let inner: f64 = (1..m).map(|k| f(a + k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 }).sum();
    (f(a) + f(b) + inner) * h / 3.0
}

fn gauss_pdf(e: f64, sigma: f64) -> f64 {
    (-0.5 * (e / sigma).powi(2)).exp() / (sigma * (2.0 * std::f64::consts::PI).sqrt())
}

/// `E l(c - eps) - E l(-eps)` for `eps ~ N(0, sigma^2)` by quadrature.
fn shifted_excess(loss: &Loss, c: f64, sigma: f64) -> f64 {
    let w = 12.0 * sigma;
    simpson(|e| (loss.eval(c, e).unwrap() - loss.eval(0.0, e).unwrap()) * gauss_pdf(e, sigma), -w, w, 20_000)
}

#[test]
fn shifted_predictor_matches_quadrature() {
    let target = registered_target("sine").unwrap();
    let sigma = 0.7;
    let model = TargetModel::Regression { target: target.clone(), noise: Noise::Gaussian { sigma } };
    for (loss, c) in [(Loss::Huber { delta: 1.0 }, 0.4), (Loss::Huber { delta: 0.3 }, -0.9), (Loss::L1, 0.25)] {
        let mut h = |x: &[f64]| target.eval(x) + c;
        let est = estimate_excess_risk(&mut h, &model, &loss, 200_000, 42).unwrap();
        let want = shifted_excess(&loss, c, sigma);
        assert!((est.estimate - want).abs() < 3.0 * est.se, "{loss:?}, c={c}: {} vs {want} (se {})", est.estimate, est.se);
    }
}

#[test]
fn quadrature_oracle_closed_forms() {
    // Squared loss: E (c - eps)^2 - E eps^2 = c^2.
    assert!((shifted_excess(&Loss::Squared, 0.6, 1.3) - 0.36).abs() < 1e-10);
    // L1: E|c - eps| - E|eps| for sigma = 1 is 2 phi(c) + c (2 Phi(c) - 1) - 2 phi(0).
    let c: f64 = 0.5;
    let norm_cdf_half = 0.691_462_461_274_013_1;
    let l1 = 2.0 * gauss_pdf(c, 1.0) + c * (2.0 * norm_cdf_half - 1.0) - 2.0 * gauss_pdf(0.0, 1.0);
    assert!((shifted_excess(&Loss::L1, c, 1.0) - l1).abs() < 1e-9);
}

#[test]
fn target_itself_has_exactly_zero_excess_risk_on_every_model() {
    let sq = registered_target("square").unwrap();
    let models = [
        TargetModel::Regression { target: sq.clone(), noise: Noise::StudentT { df: 3.0, scale: 0.5 } },
        TargetModel::Classification { target: sq.clone() },
        TargetModel::Arx { model: depnet::datagen::ArxModel::ar1(0.6, 1.0), burn_in: 100 },
    ];
    let losses = [Loss::Huber { delta: 1.0 }, Loss::Logistic, Loss::L1];
    for (m, loss) in models.iter().zip(losses) {
        let mut h = |x: &[f64]| m.h_star(x);
        let r = estimate_excess_risk(&mut h, m, &loss, 5000, 3).unwrap();
        assert_eq!(r.estimate, 0.0);
        assert_eq!(r.se, 0.0);
    }
}

#[test]
fn slope_on_the_phi_axis_for_a_dependent_structure() {
    let st = DependenceStructure::AlphaSubexp { rho: 1.0 };
    let ns = [256.0, 1024.0, 4096.0, 16384.0];
    // Risk exactly 2 phi(n)^-0.8 with phi(n) = sqrt(n).
    let risks: Vec<f64> = ns.iter().map(|n: &f64| 2.0 * n.sqrt().powf(-0.8)).collect();
    let phi = fit_slope(&ns, &risks, None, SlopeAxis::PhiN, &st).unwrap();
    assert!((phi.slope + 0.8).abs() < 1e-12);
    assert!((phi.intercept - 2f64.ln()).abs() < 1e-12);
    let raw = fit_slope(&ns, &risks, None, SlopeAxis::RawN, &st).unwrap();
    assert!((raw.slope + 0.4).abs() < 1e-12);
}

#[test]
fn nonpositive_risks_are_floored_before_the_fit() {
    assert_eq!(floor_risk(-1e-3, 2e-4), (2e-4, true));
    assert_eq!(floor_risk(0.0, 0.0), (1e-12, true));
    let ns = [100.0, 200.0, 400.0];
    let fit = fit_slope(&ns, &[1e-2, -1e-4, 2.5e-3], Some(&[1e-4, 5e-3, 1e-4]), SlopeAxis::RawN, &DependenceStructure::Iid).unwrap();
    assert_eq!(fit.floored, vec![false, true, false]);
    assert!((fit.slope + 1.0).abs() < 1e-12);
}
