use royroot::power::*;
use royroot::{Error, FDist, Scenario, SimConfig};

fn null_cfg() -> SimConfig {
    SimConfig::new(1_000_000, DEFAULT_NULL_SEED).unwrap()
}

#[test]
fn univariate_threshold_is_scaled_f_quantile() {
    let (n_h, n_e) = (4u32, 20u32);
    let s = Scenario::case4(1, n_h, n_e, 5.0).unwrap();
    let (t, se) = null_threshold(&s, 0.05, &SimConfig::new(200_000, 3).unwrap()).unwrap();
    let exact = FDist::central(n_h as f64, n_e as f64).unwrap().quantile(0.95).unwrap() * n_h as f64 / n_e as f64;
    assert!((t - exact).abs() < 3.0 * se, "{t} vs {exact} (se {se})");
}

#[test]
fn threshold_is_reproducible_across_pools() {
    let s = Scenario::case4(5, 4, 35, 0.0).unwrap();
    let cfg = SimConfig::new(200_000, 42).unwrap();
    let run = |n| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .unwrap()
            .install(|| null_threshold(&s, 0.05, &cfg).unwrap())
    };
    assert_eq!(run(1), run(2));
}

#[test]
fn threshold_needs_enough_replicates() {
    let s = Scenario::case4(3, 2, 27, 0.0).unwrap();
    let e = null_threshold(&s, 0.01, &SimConfig::new(9_999, 1).unwrap()).unwrap_err();
    assert!(matches!(e, Error::InvalidConfig(_)));
    assert!(null_threshold(&s, 0.01, &SimConfig::new(10_000, 1).unwrap()).is_ok());
}

#[test]
fn null_equivalents() {
    let s = Scenario::case5(2, 5, 40, 0.6).unwrap();
    assert_eq!(null_equivalent(&s), Scenario::case4(2, 5, 35, 0.0).unwrap());
    let s = Scenario::case3(3, 2, 27, 4.0).unwrap();
    assert_eq!(null_equivalent(&s), Scenario::case4(3, 2, 27, 0.0).unwrap());
    let s = Scenario::case1(3, 2, 4.0, 1.5).unwrap();
    assert_eq!(null_equivalent(&s), Scenario::case2(3, 2, 0.0, 1.5).unwrap());
}

#[test]
fn manova_reference_powers() {
    let r =
        power(&PowerSpec::monte_carlo(Scenario::case4(3, 2, 27, 10.0).unwrap(), 0.01, null_cfg()).unwrap()).unwrap();
    assert!((r.power - 0.271).abs() <= 0.002, "{}", r.power);
    assert_eq!(r.threshold_source, ThresholdSource::MonteCarloNull);
    assert!(r.threshold_se > 0.0);
    let r =
        power(&PowerSpec::monte_carlo(Scenario::case4(6, 5, 54, 40.0).unwrap(), 0.01, null_cfg()).unwrap()).unwrap();
    assert!((r.power - 0.839).abs() <= 0.002, "{}", r.power);
}

#[test]
fn cca_reference_power() {
    let r = power(&PowerSpec::monte_carlo(Scenario::case5(2, 5, 40, 0.7).unwrap(), 0.05, null_cfg()).unwrap()).unwrap();
    assert!((r.power - 0.977).abs() <= 0.002, "{}", r.power);
}

#[test]
fn infinite_threshold_gives_zero_power() {
    let s = Scenario::case4(3, 2, 27, 0.0).unwrap();
    let r = power(&PowerSpec::with_threshold(s, 0.05, f64::INFINITY).unwrap()).unwrap();
    assert_eq!(r.power, 0.0);
    assert_eq!(r.threshold_se, 0.0);
    assert!(PowerSpec::with_threshold(s, 0.05, -1.0).is_err());
    assert!(PowerSpec::with_threshold(s, 1.0, 1.0).is_err());
}

#[test]
fn power_nondecreasing_in_signal() {
    // (template, grid start, grid end, threshold)
    let cases = [
        (Scenario::case1(4, 3, 0.0, 1.0).unwrap(), 8.0, 30.0, 30.0),
        (Scenario::case2(4, 3, 0.0, 1.0).unwrap(), 8.0, 40.0, 25.0),
        (Scenario::case3(4, 3, 30, 0.0).unwrap(), 0.0, 10.0, 0.9),
        (Scenario::case4(4, 3, 30, 0.0).unwrap(), 0.0, 40.0, 0.9),
        (Scenario::case5(2, 4, 40, 0.0).unwrap(), 0.0, 0.9, 0.6),
    ];
    for (template, lo, hi, t) in cases {
        let mut last = 0.0;
        for i in 0..20 {
            let s = template.with_signal(lo + (hi - lo) * i as f64 / 19.0).unwrap();
            let p = power_at(&s, t).unwrap();
            assert!(p >= last - 1e-9, "{s:?}: {p} < {last}");
            last = p;
        }
        assert!(last > 0.5);
    }
}

#[test]
fn known_covariance_power_dips_near_null() {
    // The coupled term scales like 1/χ²_{n_H}(ω), so the approximate law
    // loses mass above t as ω leaves 0 before the signal takes over.
    let cfg = SimConfig::new(1_000_000, 5).unwrap();
    let mut powers = Vec::new();
    for w in [0.0, 4.0] {
        let s = Scenario::case2(4, 3, w, 1.0).unwrap();
        let law = royroot::royapprox::build_law(&s).unwrap();
        let draws = cfg.run(|r| law.sample(r));
        let sampled = draws.iter().filter(|&&x| x > 25.0).count() as f64 / draws.len() as f64;
        let p = power_at(&s, 25.0).unwrap();
        assert!(
            (p - sampled).abs() < 4.0 * (p * (1.0 - p) / 1e6).sqrt(),
            "{p} vs {sampled}"
        );
        powers.push(p);
    }
    assert!(powers[1] < powers[0]);
}

#[test]
fn single_row_table_equals_power() {
    let request = PowerSpec::monte_carlo(
        Scenario::case4(3, 2, 27, 20.0).unwrap(),
        0.05,
        SimConfig::new(100_000, 5).unwrap(),
    )
    .unwrap();
    let rows = power_table(&[TableSpec {
        power: request,
        simulate: None,
        pillai: false,
    }]);
    let direct = power(&request).unwrap();
    assert_eq!(rows[0].theory, Some(direct.power));
    assert_eq!(rows[0].threshold, Some(direct.threshold_used));
    assert!(rows[0].simulated.is_none() && rows[0].error.is_none());
}

#[test]
fn table_captures_row_errors() {
    let good = PowerSpec::with_threshold(Scenario::case4(3, 2, 27, 20.0).unwrap(), 0.05, 0.5).unwrap();
    let mut bad = good;
    bad.threshold = Some(-2.0);
    let mut starved = PowerSpec::monte_carlo(good.scenario, 0.01, SimConfig::new(10, 1).unwrap()).unwrap();
    starved.null_sim.replicates = 10;
    let rows = power_table(&[
        TableSpec {
            power: good,
            simulate: Some(SimConfig::new(20_000, 9).unwrap()),
            pillai: false,
        },
        TableSpec {
            power: bad,
            simulate: None,
            pillai: false,
        },
        TableSpec {
            power: starved,
            simulate: None,
            pillai: false,
        },
    ]);
    assert!(rows[0].error.is_none());
    let (sim, theory) = (rows[0].simulated.unwrap(), rows[0].theory.unwrap());
    assert!((rows[0].gap.unwrap() - (sim - theory)).abs() < 1e-15);
    assert!(rows[1].error.as_deref().unwrap().contains("threshold"));
    assert!(rows[2].error.as_deref().unwrap().contains("replicates"));
    assert!(power_table(&[]).is_empty());
}

#[test]
fn sample_size_edges() {
    let cfg = SimConfig::new(20_000, 4).unwrap();
    let s = Scenario::case4(3, 2, 27, 20.0).unwrap();
    let r = sample_size_search(&s, 0.05, 0.0, Vary::NE, (10, 60), &cfg).unwrap();
    assert_eq!(r.value, 10);
    let e = sample_size_search(&s, 0.05, 1.0, Vary::NE, (10, 60), &cfg).unwrap_err();
    assert!(matches!(e, Error::Unattainable { .. }));
    assert!(sample_size_search(&s, 0.05, 0.5, Vary::N, (10, 60), &cfg).is_err());
}

#[test]
fn group_size_search_brackets_reference_power() {
    // m = 3, p = 3 groups, ω = 20 at n_k = 10 gives 0.884 at 5%.
    let template = Scenario::case4(3, 2, 27, 20.0).unwrap();
    let vary = Vary::GroupSize {
        groups: 3,
        reference: 10,
    };
    let cfg = SimConfig::new(200_000, 8).unwrap();
    let r = sample_size_search(&template, 0.05, 0.9, vary, (4, 40), &cfg).unwrap();
    assert_eq!(r.value, 11);
    let (below, p_below) = r.below.unwrap();
    assert_eq!(below, 10);
    assert!(p_below < 0.9 && r.power >= 0.9);
    assert!((p_below - 0.884).abs() < 0.005);
    assert_eq!(
        vary.apply(&template, 12).unwrap(),
        Scenario::case4(3, 2, 33, 24.0).unwrap()
    );
}

#[test]
fn pillai_column() {
    let cfg = SimConfig::new(20_000, 10).unwrap();
    let request = PowerSpec::monte_carlo(Scenario::case4(3, 2, 27, 20.0).unwrap(), 0.05, cfg).unwrap();
    let row = TableSpec {
        power: request,
        simulate: Some(cfg),
        pillai: true,
    };
    let rows = power_table(&[row.clone(), TableSpec { pillai: false, ..row }]);
    let (with, without) = (&rows[0], &rows[1]);
    assert!(with.error.is_none(), "{:?}", with.error);
    assert_eq!(with.threshold, without.threshold);
    assert_eq!(with.simulated, without.simulated);
    let pt = with.pillai_threshold.unwrap();
    assert!(pt > 0.0 && pt < 2.0);
    assert!(with.pillai_simulated.unwrap() > 0.05);
    let known = PowerSpec::monte_carlo(Scenario::case2(3, 2, 20.0, 1.0).unwrap(), 0.05, cfg).unwrap();
    let rows = power_table(&[TableSpec {
        power: known,
        simulate: None,
        pillai: true,
    }]);
    assert!(rows[0].error.as_deref().unwrap().contains("Pillai"));
}
