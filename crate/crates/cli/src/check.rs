//! Self-test suites run by `royroot check`.

use std::cell::RefCell;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use royroot::distributions::FChiMethod;
use royroot::linalg::Matrix;
use royroot::montecarlo::{ks_distance, perturbation_check, simulate_cca};
use royroot::royapprox::{build_law, LawEvaluator};
use royroot::{FChiParams, FDist, Result, Scenario, SimConfig};

use crate::args::Suite;

#[derive(Debug, Clone, Serialize)]
pub struct Outcome {
    pub suite: &'static str,
    pub check: String,
    pub measured: f64,
    pub limit: f64,
    pub pass: bool,
}

impl Outcome {
    fn below(suite: &'static str, check: impl Into<String>, measured: f64, limit: f64) -> Self {
        Outcome {
            suite,
            check: check.into(),
            measured,
            limit,
            pass: measured <= limit,
        }
    }
}

pub fn run(suite: Suite, seed: u64) -> Result<Vec<Outcome>> {
    let mut out = Vec::new();
    if matches!(suite, Suite::All | Suite::Fchi) {
        out.extend(fchi(seed, 200)?);
    }
    if matches!(suite, Suite::All | Suite::Reductions) {
        out.extend(reductions(seed)?);
    }
    if matches!(suite, Suite::All | Suite::Perturbation) {
        out.extend(perturbation(seed, 20)?);
    }
    Ok(out)
}

/// Integral and negative-binomial F^χ representations at random points.
pub fn fchi(seed: u64, points: usize) -> Result<Vec<Outcome>> {
    let mut rng = SimConfig::new(1, seed)?.rng(0);
    let mut worst: f64 = 0.0;
    for _ in 0..points {
        let a = rng.random_range(1..=10) as f64;
        let b = rng.random_range(5.0..120.0);
        let rho: f64 = rng.random_range(0.05..0.9);
        let n = rng.random_range(10.0..150.0);
        let law = FChiParams::from_correlation(a, b, rho, n)?;
        let u = law.mean() * rng.random_range(0.3..2.0);
        let i = law.cdf_with(u, FChiMethod::Integral)?;
        let m = law.cdf_with(u, FChiMethod::Mixture)?;
        worst = worst.max((i - m).abs());
    }
    Ok(vec![Outcome::below(
        "fchi",
        format!("max |integral - mixture| over {points} points"),
        worst,
        1e-7,
    )])
}

/// Cases where the approximation is the exact law.
pub fn reductions(seed: u64) -> Result<Vec<Outcome>> {
    let mut worst4: f64 = 0.0;
    let mut worst3: f64 = 0.0;
    for &(n_h, n_e, signal) in &[(1u32, 10u32, 5.0), (3, 20, 12.0), (6, 45, 40.0), (2, 8, 0.0)] {
        let f4 = FDist::new(n_h as f64, n_e as f64, signal)?;
        let f3 = FDist::central(n_h as f64, n_e as f64)?;
        let l4 = LawEvaluator::new(&build_law(&Scenario::case4(1, n_h, n_e, signal)?)?);
        let l3 = LawEvaluator::new(&build_law(&Scenario::case3(1, n_h, n_e, signal)?)?);
        let scale = n_e as f64 / n_h as f64;
        for k in 1..=40 {
            let t = 0.05 * k as f64 * (1.0 + signal / n_e as f64);
            worst4 = worst4.max((l4.cdf(t)? - f4.cdf(scale * t)?).abs());
            worst3 = worst3.max((l3.cdf(t)? - f3.cdf(scale * t / (1.0 + signal))?).abs());
        }
    }
    let (q, n, rho) = (4u32, 30u32, 0.5);
    let law = LawEvaluator::new(&build_law(&Scenario::case5(1, q, n, rho)?)?);
    let sim = simulate_cca(1, q, n, rho, &SimConfig::new(100_000, seed)?)?;
    let failure = RefCell::new(None);
    let ks = ks_distance(&sim.values, |x| {
        law.cdf(x).unwrap_or_else(|e| {
            failure.borrow_mut().get_or_insert(e);
            f64::NAN
        })
    });
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(vec![
        Outcome::below("reductions", "case 4, m = 1 vs scaled noncentral F", worst4, 1e-10),
        Outcome::below("reductions", "case 3, m = 1 vs scaled central F", worst3, 1e-10),
        Outcome::below("reductions", "case 5, p = 1 vs simulation (KS, N = 1e5)", ks, 0.005),
    ])
}

/// Remainder ratios of the three-term expansion over ε = 0.1, 0.05, 0.025.
pub fn perturbation(seed: u64, instances: usize) -> Result<Vec<Outcome>> {
    let cfg = SimConfig::new(instances as u64, seed)?;
    let mut lo = f64::INFINITY;
    let mut hi: f64 = 0.0;
    let mut at_zero: f64 = 0.0;
    for i in 0..instances {
        let mut rng = cfg.rng(i as u64);
        let n = rng.random_range(3..8);
        let m = rng.random_range(2..6);
        let u: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(StandardNormal) + 1.0).collect();
        let xi = Matrix::from_fn(m - 1, n, |_, _| rng.sample(StandardNormal));
        at_zero = at_zero.max(perturbation_check(&u, &xi, 0.0)?.remainder.abs());
        let rem: Vec<f64> = [0.1, 0.05, 0.025]
            .iter()
            .map(|&e| perturbation_check(&u, &xi, e).map(|p| p.remainder.abs()))
            .collect::<Result<_>>()?;
        for w in rem.windows(2) {
            let ratio = w[0] / w[1];
            lo = lo.min(ratio);
            hi = hi.max(ratio);
        }
    }
    let mut lower = Outcome::below(
        "perturbation",
        format!("min remainder ratio over {instances} instances"),
        lo,
        128.0,
    );
    lower.pass = (32.0..=128.0).contains(&lo);
    lower.limit = 32.0;
    let mut upper = Outcome::below(
        "perturbation",
        format!("max remainder ratio over {instances} instances"),
        hi,
        128.0,
    );
    upper.pass = (32.0..=128.0).contains(&hi);
    Ok(vec![
        Outcome::below("perturbation", "remainder at eps = 0", at_zero, 0.0),
        lower,
        upper,
    ])
}
