use super::*;

fn small(seed: u64) -> SimConfig {
    SimConfig { subjects: 5, reps: 60, d_grid: vec![0.0, 0.3], seed, ..SimConfig::default() }
}

#[test]
fn config_validation() {
    assert!(SimConfig::default().validate().is_ok());
    let bad = [
        SimConfig { subjects: 1, ..SimConfig::default() },
        SimConfig { reps: 0, ..SimConfig::default() },
        SimConfig { alpha: 1.0, ..SimConfig::default() },
        SimConfig { n_range: (80, 50), ..SimConfig::default() },
        SimConfig { n_range: (1, 5), ..SimConfig::default() },
        SimConfig { v_range: (0.0, 1.0), ..SimConfig::default() },
        SimConfig { mu_range: (1.0, -1.0), ..SimConfig::default() },
        SimConfig { sigma_rand: -0.1, ..SimConfig::default() },
        SimConfig { d_grid: vec![], ..SimConfig::default() },
        SimConfig { family: Family::FScaled { d1: 2.0, d2: 4.0 }, ..SimConfig::default() },
    ];
    for c in bad {
        assert!(matches!(c.validate(), Err(Error::InvalidConfig(_))), "{c:?}");
    }
}

#[test]
fn single_replication_is_bernoulli() {
    let config = SimConfig { reps: 1, ..small(5) };
    let cell = run_cell(&config, 0.1, &Method::ALL, Execution::Serial).unwrap();
    for m in Method::ALL {
        let r = cell.rate(m).unwrap();
        assert!(r == 0.0 || r == 1.0);
    }
}

#[test]
fn serial_and_parallel_agree() {
    let config = small(77);
    for d in [0.0, 0.15] {
        let a = run_cell(&config, d, &Method::ALL, Execution::Serial).unwrap();
        let b = run_cell(&config, d, &Method::ALL, Execution::Parallel).unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn panels_replay_bit_identically() {
    let specs: Vec<PanelSpec> = simulation1_panels(11)
        .into_iter()
        .map(|mut s| {
            s.config.reps = 40;
            s
        })
        .collect();
    let a = run_panels(&specs, Execution::Parallel).unwrap();
    let b = run_panels(&specs, Execution::Parallel).unwrap();
    assert_eq!(a, b);
    let names: Vec<&str> = a.iter().map(|p| p.name.as_str()).collect();
    assert_eq!(names, ["fe_s5", "fe_s20", "re_s5", "re_s20"]);
}

#[test]
fn curves_report_binomial_standard_errors() {
    let config = small(3);
    let panel = run_panel("p", &config, &Method::ALL, Execution::Parallel).unwrap();
    for curve in &panel.curves {
        assert_eq!(curve.d, config.d_grid);
        for (r, se) in curve.rate.iter().zip(&curve.se) {
            assert!((0.0..=1.0).contains(r));
            let k = (r * config.reps as f64).round();
            let p = k / config.reps as f64;
            assert_eq!(*se, (p * (1.0 - p) / config.reps as f64).sqrt());
        }
    }
}

#[test]
fn naive_t_is_calibrated_on_fixed_effect_data() {
    let config = SimConfig { subjects: 20, seed: 101, ..SimConfig::default() };
    let r = run_cell(&config, 0.0, &[Method::NaivePairedT], Execution::Parallel)
        .unwrap()
        .rate(Method::NaivePairedT)
        .unwrap();
    assert!((0.03..=0.07).contains(&r), "rate {r}");
}

#[test]
fn dl_is_liberal_with_five_subjects() {
    let config = SimConfig { subjects: 5, sigma_rand: 0.2, seed: 202, ..SimConfig::default() };
    let r =
        run_cell(&config, 0.0, &[Method::SssReInvVar], Execution::Parallel).unwrap().rate(Method::SssReInvVar).unwrap();
    assert!((0.06..=0.12).contains(&r), "rate {r}");
}

#[test]
fn power_grows_with_effect() {
    for sigma_rand in [0.0, 0.2] {
        let config = SimConfig { subjects: 20, sigma_rand, d_grid: vec![0.0, 0.3], seed: 303, ..SimConfig::default() };
        let panel = run_panel("mono", &config, &Method::ALL, Execution::Parallel).unwrap();
        for c in &panel.curves {
            assert!(c.rate[1] - c.rate[0] >= 0.2, "{} sigma_rand {sigma_rand}: {:?}", c.method, c.rate);
        }
    }
}

#[test]
fn estimator_failures_abort_with_context() {
    // identical samples in both conditions make every Welch variance zero
    let config = SimConfig { v_range: (1e-300, 1e-300), reps: 3, ..small(1) };
    let err = run_cell(&config, 0.0, &[Method::Stouffer], Execution::Serial).unwrap_err();
    assert!(matches!(err, Error::Replication { rep: 0, .. }), "{err}");
}

#[test]
fn method_labels_match_serde() {
    for m in Method::ALL {
        assert_eq!(serde_json::to_string(&m).unwrap(), format!("\"{}\"", m.label()));
    }
}

#[test]
fn pooling_demo_constants() {
    let demo = pooling_demo(0).unwrap();
    assert_eq!(demo.config, DemoConfig { subjects: 4, samples: 20, shift: 1.0, variance: 4.0, offset_sd: 15.0 });
    assert_eq!(demo.subjects.len(), 4);
    assert_eq!(pooling_demo(0).unwrap(), demo);
}

#[test]
fn pooling_creates_spurious_correlation() {
    let seeds = 500;
    let strong = (0..seeds).filter(|&s| pooling_demo(s).unwrap().pooled_pearson_r > 0.8).count();
    assert!(strong as f64 >= 0.9 * seeds as f64, "{strong}/{seeds}");

    let flat = DemoConfig { offset_sd: 0.0, ..DemoConfig::default() };
    let weak = (0..seeds).filter(|&s| pooling_demo_with(&flat, s).unwrap().pooled_pearson_r.abs() < 0.3).count();
    assert!(weak as f64 >= 0.9 * seeds as f64, "{weak}/{seeds}");
}

#[test]
fn pooling_hides_a_consistent_shift() {
    let seeds = 500u64;
    let mut pooled_missed = 0;
    let mut subject_hits = 0;
    for s in 0..seeds {
        let demo = pooling_demo(s).unwrap();
        pooled_missed += usize::from(demo.pooled_welch_p >= 0.05);
        subject_hits += demo.subjects.iter().filter(|x| x.welch_p < 0.05).count();
    }
    assert!(pooled_missed as f64 >= 0.6 * seeds as f64, "{pooled_missed}");
    assert!(subject_hits as f64 >= 0.8 * 4.0 * seeds as f64, "{subject_hits}");

    // without offsets, pooling is more powerful than any single subject
    let flat = DemoConfig { offset_sd: 0.0, ..DemoConfig::default() };
    let mut pooled_hits = 0;
    let mut subject_hits = 0;
    for s in 0..seeds {
        let demo = pooling_demo_with(&flat, s).unwrap();
        pooled_hits += usize::from(demo.pooled_welch_p < 0.05);
        subject_hits += demo.subjects.iter().filter(|x| x.welch_p < 0.05).count();
    }
    assert!(pooled_hits as f64 / seeds as f64 > subject_hits as f64 / (4 * seeds) as f64);
}
