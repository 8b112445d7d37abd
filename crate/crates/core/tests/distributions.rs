use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use royroot::distributions::FChiMethod;
use royroot::{ChiSq, FChiParams, FDist};

// Reference values: Poisson / chi-square mixtures summed in mpmath at 30
// digits; F^χ by mpmath quadrature of the noncentral F CDF against the
// chi-square density.

#[test]
fn chisq_reference() {
    for (dof, nc, x, want) in [
        (3.0, 0.0, 2.0, 0.42759329552912017),
        (4.0, 10.0, 12.0, 0.43728489064806486),
        (1.0, 40.0, 30.0, 0.19840567572407375),
        (7.5, 120.0, 150.0, 0.84428987449354782),
    ] {
        let d = ChiSq::new(dof, nc).unwrap();
        let got = d.cdf(x).unwrap();
        assert!((got - want).abs() < 1e-12, "chi2({dof}, {nc}) at {x}: {got} vs {want}");
        assert!((d.sf(x).unwrap() - (1.0 - want)).abs() < 1e-12);
    }
}

#[test]
fn f_reference() {
    for (d1, d2, nc, x, want) in [
        (2.0, 27.0, 0.0, 1.5, 0.75885743427789431),
        (4.0, 31.0, 40.0, 5.0, 0.030645409788985642),
        (5.0, 41.0, 10.0, 2.0, 0.26688440659769096),
        (1.0, 10.0, 5.0, 0.7, 0.079990490356287283),
    ] {
        let d = FDist::new(d1, d2, nc).unwrap();
        let got = d.cdf(x).unwrap();
        assert!(
            (got - want).abs() < 1e-12,
            "F({d1}, {d2}, {nc}) at {x}: {got} vs {want}"
        );
    }
}

#[test]
fn fchi_reference_both_methods() {
    for (a, b, rho, n, u, want) in [
        (5.0, 34.0, 0.5, 40.0, 2.0, 0.169426681148202),
        (7.0, 41.0, 0.6, 50.0, 3.5, 0.224075802282737),
        (10.0, 36.0, 0.7, 50.0, 6.0, 0.543625696317481),
    ] {
        let law = FChiParams::from_correlation(a, b, rho, n).unwrap();
        for method in [FChiMethod::Integral, FChiMethod::Mixture] {
            let got = law.cdf_with(u, method).unwrap();
            assert!(
                (got - want).abs() < 1e-9,
                "{method:?} ({a}, {b}, {rho}, {n}) at {u}: {got} vs {want}"
            );
        }
    }
}

#[test]
fn quantiles_invert_cdfs() {
    type Curve = Box<dyn Fn(f64) -> f64>;
    let laws: [(&str, Curve, Curve); 3] = [
        {
            let d = ChiSq::new(6.0, 25.0).unwrap();
            (
                "chi2",
                Box::new(move |x| d.cdf(x).unwrap()),
                Box::new(move |p| d.quantile(p).unwrap()),
            )
        },
        {
            let d = FDist::new(3.0, 20.0, 12.0).unwrap();
            (
                "F",
                Box::new(move |x| d.cdf(x).unwrap()),
                Box::new(move |p| d.quantile(p).unwrap()),
            )
        },
        {
            let d = FChiParams::from_correlation(5.0, 34.0, 0.5, 40.0).unwrap();
            (
                "Fchi",
                Box::new(move |x| d.cdf(x).unwrap()),
                Box::new(move |p| d.quantile(p).unwrap()),
            )
        },
    ];
    for (name, cdf, quantile) in &laws {
        for p in [1e-4, 0.01, 0.5, 0.95, 0.9999] {
            let q = quantile(p);
            assert!((cdf(q) - p).abs() < 1e-9, "{name}: p={p}, q={q}");
        }
    }
}

#[test]
fn parameter_errors() {
    assert!(ChiSq::new(0.0, 1.0).is_err());
    assert!(ChiSq::new(2.0, -1.0).is_err());
    assert!(FDist::new(2.0, 0.0, 0.0).is_err());
    assert!(FChiParams::from_correlation(2.0, 10.0, 1.0, 5.0).is_err());
    assert!(FDist::central(2.0, 5.0).unwrap().quantile(1.0).is_err());
}

#[test]
fn sample_means_match() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let n = 200_000;
    let f = FDist::new(4.0, 30.0, 10.0).unwrap();
    let fc = FChiParams::from_correlation(5.0, 34.0, 0.5, 40.0).unwrap();
    let chi = ChiSq::new(3.0, 7.0).unwrap();
    let draws: [(&str, f64, f64, Vec<f64>); 3] = [
        (
            "F",
            f.mean(),
            f.variance(),
            (0..n).map(|_| f.sample(&mut rng)).collect(),
        ),
        (
            "Fchi",
            fc.mean(),
            fc.variance(),
            (0..n).map(|_| fc.sample(&mut rng)).collect(),
        ),
        (
            "chi2",
            chi.mean(),
            chi.variance(),
            (0..n).map(|_| chi.sample(&mut rng)).collect(),
        ),
    ];
    for (name, mean, var, xs) in draws {
        let avg = xs.iter().sum::<f64>() / n as f64;
        let se = (var / n as f64).sqrt();
        assert!((avg - mean).abs() < 4.0 * se, "{name}: {avg} vs {mean} (se {se})");
    }
}

mod props {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn f_cdf_monotone_and_bounded(d1 in 0.5f64..30.0, d2 in 0.5f64..80.0, nc in 0.0f64..60.0, x in 0.0f64..20.0) {
            let d = FDist::new(d1, d2, nc).unwrap();
            let (a, b) = (d.cdf(x).unwrap(), d.cdf(x * 1.05 + 1e-3).unwrap());
            prop_assert!((0.0..=1.0).contains(&a) && a <= b + 1e-14);
            prop_assert!((a + d.sf(x).unwrap() - 1.0).abs() < 1e-12);
        }

        #[test]
        fn fchi_representations_agree(a in 1u32..12, b in 5.0f64..100.0, rho in 0.05f64..0.9, n in 10.0f64..120.0, k in 0.3f64..2.0) {
            let law = FChiParams::from_correlation(a as f64, b, rho, n).unwrap();
            let u = k * law.mean();
            let i = law.cdf_with(u, FChiMethod::Integral).unwrap();
            let m = law.cdf_with(u, FChiMethod::Mixture).unwrap();
            prop_assert!((i - m).abs() < 1e-7, "{} vs {}", i, m);
        }
    }
}
