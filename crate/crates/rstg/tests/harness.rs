use rstg::config::{ExperimentConfig, ExperimentKind};
use rstg::experiments::{exp_clique_census, exp_clique_scaling, exp_dominance, exp_negative_corr, run_experiment, Report};
use rstg::output::write_csv;
use rstg::stats::Ecdf;
use rstg_core::clique::{is_temporal_clique, max_temporal_clique, CliqueMode, SolverOptions};
use rstg_core::{generate_rstg, GraphParams};

fn csv(cfg: &ExperimentConfig) -> Vec<u8> {
    let mut out = Vec::new();
    write_csv(&run_experiment(cfg).unwrap(), &mut out).unwrap();
    out
}

#[test]
fn rerun_and_thread_count_give_same_bytes() {
    for kind in ExperimentKind::ALL {
        let mut cfg = ExperimentConfig::new(kind, vec![25, 40], 300).with_p(vec![0.08]);
        cfg.master_seed = 0xfeed;
        if kind == ExperimentKind::WalkTau {
            cfg.p = None;
            cfg.n = vec![3, 5];
        }
        let once = csv(&cfg);
        assert_eq!(csv(&cfg), once, "{kind}");
        cfg.threads = 8;
        assert_eq!(csv(&cfg), once, "{kind}");
    }
}

#[test]
fn records_replay_from_their_seed() {
    let mut cfg = ExperimentConfig::new(ExperimentKind::NegativeCorr, vec![30], 50).with_p(vec![0.1]);
    cfg.master_seed = 1;
    let full = run_experiment(&cfg).unwrap();
    cfg.trials = 10;
    let prefix = run_experiment(&cfg).unwrap();
    assert_eq!(&full.records[..10], &prefix.records[..]);
}

#[test]
fn summaries_are_consistent() {
    let res = exp_dominance(60, 0.06, 400, 2).unwrap();
    for s in &res.summaries {
        for (_, stats) in &s.columns {
            let stats = stats.as_ref().unwrap();
            assert!(stats.min <= stats.mean && stats.mean <= stats.max);
            let cdf: Vec<f64> = stats.ecdf.iter().map(|&(_, f)| f).collect();
            assert!(cdf.windows(2).all(|w| w[0] <= w[1]));
            assert_eq!(cdf.last(), Some(&1.0));
        }
    }
}

#[test]
fn scaling_at_p_zero_gives_singletons() {
    let cfg = ExperimentConfig::new(ExperimentKind::CliqueScaling, vec![50, 80], 10).with_p(vec![0.0]);
    let res = run_experiment(&cfg).unwrap();
    assert!(res.records.iter().all(|r| r.values[0] == Some(1.0)));
}

#[test]
fn scaling_subcritical_uses_exact_solver() {
    let res = exp_clique_scaling(&[100], 0.5, 20, 4).unwrap();
    let Report::CliqueScaling(points) = &res.report else { panic!() };
    assert_eq!(points[0].size_bound, Some(3));
    assert!(res.column(0, "exact").iter().all(|&e| e == 1.0));
    // exact sizes must match a direct solve of the same graphs
    for r in res.records.iter().take(5) {
        let g = generate_rstg(
            &GraphParams::from_p(100, r.p.unwrap()).unwrap(),
            rstg::seed::stream_seed(r.seed, rstg::seed::stream::GRAPH),
        )
        .unwrap();
        let c = max_temporal_clique(&g, CliqueMode::Exact, &SolverOptions::default()).unwrap();
        assert!(is_temporal_clique(&g, &c).unwrap());
        assert_eq!(r.values[0], Some(c.len() as f64));
    }
}

#[test]
fn census_covers_triangles() {
    let res = exp_clique_census(300, 0.5, 3, 100, 6).unwrap();
    let census = res.column(0, "census");
    let triangles = res.column(0, "triangles");
    assert!(census.iter().zip(&triangles).all(|(c, t)| c >= t));
    let Report::CliqueCensus(points) = &res.report else { panic!() };
    assert!(points[0].census.mean >= points[0].triangles.mean);
    assert_eq!(rstg_core::clique::census_exponent(4, 0.5), -2.0);
}

#[test]
fn tiny_p_makes_dominance_trivial() {
    let res = exp_dominance(100, 1e-9, 300, 8).unwrap();
    assert!(res.column(0, "a_size").iter().all(|&a| a == 1.0));
    let Report::Dominance(points) = &res.report else { panic!() };
    assert!(points[0].pathwise_pass);
    assert!(points[0].distributional.pass);
}

#[test]
fn independent_surrogate_has_no_covariance() {
    let mut cfg = ExperimentConfig::new(ExperimentKind::NegativeCorr, vec![150], 4000).with_p(vec![(150f64).ln() / 150.0]);
    cfg.independent = true;
    cfg.threads = 4;
    let res = run_experiment(&cfg).unwrap();
    let Report::NegativeCorr(points) = &res.report else { panic!() };
    let cov = points[0].covariance;
    assert!(cov.estimate.abs() <= 3.0 * cov.se, "{cov:?}");
    let dependent = exp_negative_corr(150, (150f64).ln() / 150.0, 2, 2000, 1).unwrap();
    let Report::NegativeCorr(points) = &dependent.report else { panic!() };
    assert!(points[0].pass);
}

#[test]
fn walk_tau_tails_match_trie() {
    let mut cfg = ExperimentConfig::new(ExperimentKind::WalkTau, vec![4], 20_000);
    cfg.paths = Some(vec![vec![0, 0, 0], vec![1, 2, 3]]);
    cfg.l_max = 3;
    cfg.threads = 4;
    let res = run_experiment(&cfg).unwrap();
    let Report::WalkTau(points) = &res.report else { panic!() };
    let exact: Vec<f64> = points[0].tails.iter().map(|t| t.exact).collect();
    assert_eq!(exact, vec![0.5, 2.0 / 16.0, 2.0 / 64.0]);
    assert!(points[0].tails.iter().all(|t| t.within_3se));
    let taus = Ecdf::new(&res.column(0, "tau")).unwrap();
    assert!((taus.cdf(0.0) - 0.5).abs() < 0.02);
}
