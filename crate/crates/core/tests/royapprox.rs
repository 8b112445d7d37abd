use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use royroot::distributions::{Component, FChiParams, FDist};
use royroot::quadrature::{integrate_breaks, QuadOptions};
use royroot::royapprox::*;
use royroot::Scenario;

fn all_cases() -> Vec<Scenario> {
    vec![
        Scenario::case1(5, 4, 10.0, 1.0).unwrap(),
        Scenario::case2(5, 4, 40.0, 1.0).unwrap(),
        Scenario::case3(5, 4, 35, 10.0).unwrap(),
        Scenario::case4(5, 4, 35, 40.0).unwrap(),
        Scenario::case5(2, 5, 40, 0.5).unwrap(),
    ]
}

#[test]
fn case4_parameters_are_exact() {
    let law = build_law(&Scenario::case4(5, 4, 35, 40.0).unwrap()).unwrap();
    assert_eq!(law.kind, LawKind::TwoF);
    assert_eq!(law.c1, 4.0 / 31.0);
    assert_eq!(law.c2, 4.0 / 32.0);
    assert_eq!(law.c3, 4.0 / 870.0);
    assert_eq!(law.comp1, Component::F(FDist::new(4.0, 31.0, 40.0).unwrap()));
    assert_eq!(law.comp2, Some(Component::F(FDist::central(4.0, 32.0).unwrap())));
}

#[test]
fn parameter_identities_hold_on_a_grid() {
    for m in 1..6u32 {
        for n_h in 1..5u32 {
            for n_e in (m + 2)..(m + 12) {
                let law = build_law(&Scenario::case4(m, n_h, n_e, 3.0).unwrap()).unwrap();
                let nu = (n_e - m) as f64;
                let a2 = (m - 1) as f64;
                assert_eq!(law.c1, n_h as f64 / (nu + 1.0));
                assert_eq!(law.c2, if m > 1 { a2 / (nu + 2.0) } else { 0.0 });
                assert_eq!(law.c3, if m > 1 { a2 / (nu * (nu - 1.0)) } else { 0.0 });
            }
        }
    }
    let law = build_law(&Scenario::case5(3, 4, 30, 0.4).unwrap()).unwrap();
    assert_eq!(law.kind, LawKind::FChiCombo);
    assert_eq!((law.c1, law.c2, law.c3), (4.0 / 24.0, 2.0 / 25.0, 2.0 / (23.0 * 22.0)));
}

#[test]
fn single_term_reductions() {
    // Case 3, m = 1: H/E scaled central F.
    let law = build_law(&Scenario::case3(1, 3, 12, 2.0).unwrap()).unwrap();
    assert_eq!((law.c2, law.c3, law.comp2), (0.0, 0.0, None));
    assert_eq!(law.eval_mode(), EvalMode::Direct);
    let f = FDist::central(3.0, 12.0).unwrap();
    for &t in &[0.1, 0.8, 2.5] {
        let want = f.cdf(t / (3.0 / 12.0 * 3.0)).unwrap();
        assert!((law_cdf(&law, t).unwrap() - want).abs() < 1e-15);
    }
    // Case 5, p = 1: (q/(n-q)) F^χ_{q,n-q}(c, n).
    let law = build_law(&Scenario::case5(1, 4, 30, 0.6).unwrap()).unwrap();
    assert_eq!((law.c2, law.c3), (0.0, 0.0));
    let fchi = FChiParams::from_correlation(4.0, 26.0, 0.6, 30.0).unwrap();
    for &t in &[0.05, 0.4, 1.3] {
        let want = fchi.cdf(t * 26.0 / 4.0).unwrap();
        assert!((law_cdf(&law, t).unwrap() - want).abs() < 1e-15);
    }
}

#[test]
fn cdf_limits_and_monotone_grid() {
    for s in all_cases() {
        let law = build_law(&s).unwrap();
        let ev = LawEvaluator::new(&law);
        assert_eq!(ev.cdf(-1.0).unwrap(), 0.0);
        assert_eq!(ev.cdf(f64::INFINITY).unwrap(), 1.0);
        let hi = law_quantile(&law, 0.9999).unwrap();
        let lo = law_quantile(&law, 0.0001).unwrap();
        assert!(ev.cdf(hi * 4.0).unwrap() > 1.0 - 1e-6);
        let n = if law.eval_mode() == EvalMode::NestedQuadrature {
            200
        } else {
            1000
        };
        let mut prev = 0.0;
        for i in 0..n {
            let t = lo * 0.5 + (hi * 1.5 - lo * 0.5) * i as f64 / (n - 1) as f64;
            let v = ev.cdf(t).unwrap();
            assert!(v >= prev - CDF_TOL, "{:?} at {t}: {v} < {prev}", s.case());
            prev = prev.max(v);
        }
    }
}

#[test]
fn convolution_matches_swapped_order() {
    // Integrating over X2 instead of X1 is an independent route to the same
    // probability.
    for s in &all_cases()[2..] {
        let law = build_law(s).unwrap();
        let swapped = ApproxLaw {
            c1: law.c2,
            scale1: 1.0,
            c2: law.w1(),
            comp1: law.comp2.unwrap(),
            comp2: Some(law.comp1),
            ..law.clone()
        };
        for &p in &[0.02, 0.3, 0.7, 0.98] {
            let t = law_quantile(&law, p).unwrap();
            let a = law_cdf(&law, t).unwrap();
            let b = law_cdf(&swapped, t).unwrap();
            assert!((a - b).abs() < 1e-8, "{:?}: {a} vs {b}", s.case());
        }
    }
}

#[test]
fn nested_quadrature_frozen_values() {
    // scipy dblquad over (X1, K) with the χ²_{m-1} CDF inside.
    let law = build_law(&Scenario::case1(5, 4, 10.0, 1.0).unwrap()).unwrap();
    assert_eq!(law.eval_mode(), EvalMode::NestedQuadrature);
    assert!((law_cdf(&law, 30.0).unwrap() - 0.320_378_392_570_214_7).abs() < 1e-8);
    assert!((law_cdf(&law, 60.0).unwrap() - 0.718_533_623_993_291_1).abs() < 1e-8);
    let law = build_law(&Scenario::case2(5, 4, 40.0, 1.0).unwrap()).unwrap();
    assert!((law_cdf(&law, 45.0).unwrap() - 0.428_954_521_758_878_9).abs() < 1e-8);
    let law = build_law(&Scenario::case2(3, 3, 10.0, 2f64.sqrt()).unwrap()).unwrap();
    assert!((law_cdf(&law, 12.0).unwrap() - 0.194_060_168_913_412_38).abs() < 1e-8);
}

#[test]
fn cdf_matches_sampling_of_the_law() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let n = 400_000;
    for s in all_cases() {
        let law = build_law(&s).unwrap();
        let mut xs: Vec<f64> = (0..n).map(|_| law.sample(&mut rng)).collect();
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for &p in &[0.1, 0.5, 0.9] {
            let t = xs[(p * n as f64) as usize];
            let got = law_cdf(&law, t).unwrap();
            let se = (p * (1.0 - p) / n as f64).sqrt();
            assert!((got - p).abs() < 5.0 * se, "{:?} p={p}: {got}", s.case());
        }
    }
}

#[test]
fn quantile_roundtrip() {
    for s in all_cases() {
        let law = build_law(&s).unwrap();
        let ev = LawEvaluator::new(&law);
        for p in [0.01, 0.1, 0.25, 0.5, 0.75, 0.9, 0.99] {
            let q = ev.quantile(p, law.mean()).unwrap();
            assert!((ev.cdf(q).unwrap() - p).abs() <= 1e-6);
        }
    }
    assert!(law_quantile(&build_law(&all_cases()[3]).unwrap(), 1.0).is_err());
}

#[test]
fn density_integrates_back() {
    let law = build_law(&Scenario::case4(5, 4, 35, 40.0).unwrap()).unwrap();
    let (a, b) = (1.0, 2.0);
    let r = integrate_breaks(|t| law_density(&law, t).unwrap(), &[a, 1.5, b], &QuadOptions::abs(1e-8)).unwrap();
    let want = law_cdf(&law, b).unwrap() - law_cdf(&law, a).unwrap();
    assert!((r.value - want).abs() < 1e-6, "{} vs {want}", r.value);
}

#[test]
fn large_error_dof_recovers_known_covariance_terms() {
    let ne = 10_000;
    let est = build_law(&Scenario::case4(5, 4, ne, 40.0).unwrap()).unwrap();
    let known = build_law(&Scenario::case2(5, 4, 40.0, 1.0).unwrap())
        .unwrap()
        .leading_terms();
    for p in [0.5, 0.9, 0.99] {
        // ℓ₁(E⁻¹H) is on the scale of ℓ₁(Σ⁻¹H) / n_E.
        let a = law_quantile(&est, p).unwrap() * ne as f64;
        let b = law_quantile(&known, p).unwrap();
        assert!((a / b - 1.0).abs() < 0.01, "p={p}: {a} vs {b}");
    }
}

#[test]
fn moment_examples() {
    let m = moments(&Scenario::case1(5, 4, 10.0, 1.0).unwrap()).unwrap();
    assert!((m.mean - (40.0 + 8.0 + 12.0 / 22.0)).abs() < 1e-12);
    assert_eq!(m.variance, 2.0 * 4.0 * 100.0 + 4.0 * 4.0 * 10.0 + 2.0 * 8.0);
    let m = moments(&Scenario::case4(5, 4, 35, 40.0).unwrap()).unwrap();
    assert!((m.mean - (44.0 / 29.0 + 4.0 / 30.0)).abs() < 1e-14);
    assert!((m.mean - 1.6506).abs() < 1e-4);
    let m = moments(&Scenario::case5(2, 5, 40, 0.0).unwrap()).unwrap();
    assert!((m.mean - 6.0 / 32.0).abs() < 1e-15);
    let m = moments(&Scenario::case2(5, 4, 40.0, 1.0).unwrap()).unwrap();
    assert!((m.mean - (40.0 + 8.0 + 12.0 / 42.0)).abs() < 1e-12);
    assert_eq!(m.variance, 160.0 + 16.0);
}

#[test]
fn moment_domain_errors() {
    assert!(moments(&Scenario::case1(5, 2, 10.0, 1.0).unwrap()).is_err());
    assert!(moments(&Scenario::case1(1, 2, 10.0, 1.0).unwrap()).is_ok());
    assert!(moments(&Scenario::case2(5, 2, 0.0, 1.0).unwrap()).is_err());
    assert!(moments(&Scenario::case4(5, 4, 8, 40.0).unwrap()).is_err());
    assert!(moments(&Scenario::case5(2, 5, 10, 0.5).unwrap()).is_err());
}

#[test]
fn variance_matches_law_components() {
    for s in &all_cases()[2..] {
        let law = build_law(s).unwrap();
        let v = moments(s).unwrap().variance;
        assert!((v / law.variance() - 1.0).abs() < 1e-12, "{:?}", s.case());
    }
}

#[test]
fn numerical_mean_close_to_formula() {
    for omega in [40.0, 80.0] {
        let s = Scenario::case4(5, 4, 35, omega).unwrap();
        let law = build_law(&s).unwrap();
        let ev = LawEvaluator::new(&law);
        let top = law_quantile(&law, 1.0 - 1e-9).unwrap();
        let r = integrate_breaks(
            |t| 1.0 - ev.cdf(t).unwrap(),
            &[0.0, law.mean(), top],
            &QuadOptions::abs(1e-7),
        )
        .unwrap();
        let m = moments(&s).unwrap().mean;
        assert!((r.value / m - 1.0).abs() < 0.05, "{} vs {m}", r.value);
    }
}

#[test]
fn satterthwaite_examples() {
    let s0 = Scenario::case5(2, 5, 40, 0.0).unwrap();
    let exact = build_law(&s0).unwrap();
    let sat = satterthwaite_law(&s0).unwrap();
    for t in [0.1, 0.5, 1.0] {
        assert!((law_cdf(&exact, t).unwrap() - law_cdf(&sat, t).unwrap()).abs() < 1e-12);
    }
    let s = Scenario::case5(2, 5, 40, 0.5).unwrap();
    let exact = build_law(&s).unwrap();
    let sat = satterthwaite_law(&s).unwrap();
    let t = law_quantile(&exact, 0.9).unwrap();
    assert!((law_cdf(&sat, t).unwrap() - 0.9).abs() < 0.01);
    for rho in [0.1, 0.5, 0.9] {
        let Component::FChi(f) = build_law(&Scenario::case5(2, 5, 40, rho).unwrap()).unwrap().comp1 else {
            panic!()
        };
        assert!(f.satterthwaite().g > 1.0);
    }
    assert!(satterthwaite_law(&all_cases()[3]).is_err());
}

#[test]
fn notes_flag_small_hypothesis_dof() {
    let law = build_law(&Scenario::case4(3, 2, 27, 10.0).unwrap()).unwrap();
    assert!(law.notes.iter().any(|n| n.contains("n_h < 4")));
    let law = build_law(&Scenario::case4(1, 2, 27, 10.0).unwrap()).unwrap();
    assert!(law.notes.iter().any(|n| n.contains("exact")));
}
