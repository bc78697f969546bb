use cnea_core::engines::{next_mode, run, Runner};
use cnea_core::{Algorithm, BenchmarkFn, EngineConfig, Mode, RngStream};
use proptest::prelude::*;

fn small_config(algo: Algorithm, n: usize, generations: usize, seed: u64) -> EngineConfig {
    let mut cfg = EngineConfig::new(algo)
        .with_population(n)
        .with_generations(generations)
        .with_seed(seed);
    if algo == Algorithm::Cea {
        cfg.cea_grid = Some((n / 5, 5));
    }
    cfg
}

#[test]
fn zero_generations_records_only_the_initial_population() {
    let f = BenchmarkFn::make("ackley", 3).unwrap();
    for algo in Algorithm::ALL {
        let t = run(&small_config(algo, 20, 0, 1), &f, &mut RngStream::new(1)).unwrap();
        assert_eq!(t.records.len(), 1, "{algo}");
        assert_eq!(t.records[0].generation, 0);
    }
}

#[test]
fn two_dim_ellipsoid_never_gets_worse() {
    let f = BenchmarkFn::make("ellipsoid", 2).unwrap();
    let t = run(&small_config(Algorithm::Cnea, 50, 100, 7), &f, &mut RngStream::new(7)).unwrap();
    assert!(t.final_best() <= t.records[0].best_fitness);
}

#[test]
fn every_engine_is_elitist_feasible_and_sized() {
    let f = BenchmarkFn::make("rastrigin", 4).unwrap();
    for algo in Algorithm::ALL {
        for seed in 0..3 {
            let cfg = small_config(algo, 30, 40, seed);
            let mut rng = RngStream::new(seed);
            let mut runner = Runner::new(&cfg, &f, &mut rng).unwrap();
            let mut prev = runner.records()[0].best_fitness;
            for _ in 0..cfg.generations {
                let best = runner.step(&mut rng).unwrap().best_fitness;
                assert!(best <= prev, "{algo} seed {seed}: {best} > {prev}");
                prev = best;
                let pop = runner.population();
                assert_eq!(pop.len(), 30);
                assert!(pop.members.iter().all(|m| f.space().contains(&m.genome)));
                assert!(pop.members.iter().all(|m| m.is_evaluated()));
            }
        }
    }
}

#[test]
fn same_seed_gives_identical_traces() {
    let f = BenchmarkFn::make("griewank", 5).unwrap();
    for algo in Algorithm::ALL {
        let cfg = small_config(algo, 25, 20, 11);
        let a = run(&cfg, &f, &mut RngStream::new(11)).unwrap();
        let b = run(&cfg, &f, &mut RngStream::new(11)).unwrap();
        assert_eq!(a.records, b.records, "{algo}");
        let c = run(&cfg, &f, &mut RngStream::new(12)).unwrap();
        assert_ne!(a.records, c.records, "{algo}");
    }
}

#[test]
fn dgea_modes_replay_from_the_trace() {
    let f = BenchmarkFn::make("rastrigin", 3).unwrap();
    let mut cfg = small_config(Algorithm::Dgea, 20, 150, 4);
    // A wide band so both switches happen in a short run.
    cfg.dgea_low = 0.05;
    cfg.dgea_high = 0.2;
    let t = run(&cfg, &f, &mut RngStream::new(4)).unwrap();
    assert_eq!(t.records[0].mode, Some(Mode::Exploit));
    for pair in t.records.windows(2) {
        let expected = next_mode(pair[0].mode.unwrap(), pair[0].diversity, cfg.dgea_low, cfg.dgea_high);
        assert_eq!(pair[1].mode, Some(expected));
    }
    let modes: Vec<Mode> = t.records.iter().filter_map(|r| r.mode).collect();
    assert!(modes.contains(&Mode::Explore));
}

#[test]
fn cnea_reports_informed_counters_and_baselines_do_not() {
    let f = BenchmarkFn::make("rastrigin", 4).unwrap();
    let t = run(&small_config(Algorithm::Cnea, 40, 30, 2), &f, &mut RngStream::new(2)).unwrap();
    assert!(t.records.iter().all(|r| r.victims.is_some() && r.replacements.is_some()));
    assert!(t.records.iter().all(|r| r.replacements <= Some(40)));
    assert!(t.records.iter().any(|r| r.victims > Some(0)));
    let t = run(&small_config(Algorithm::Sea, 40, 5, 2), &f, &mut RngStream::new(2)).unwrap();
    assert!(t.records.iter().all(|r| r.victims.is_none() && r.mode.is_none()));
}

#[test]
fn region_recording_is_opt_in() {
    let f = BenchmarkFn::make("ellipsoid", 3).unwrap();
    let mut cfg = small_config(Algorithm::Cnea, 40, 10, 3);
    let t = run(&cfg, &f, &mut RngStream::new(3)).unwrap();
    assert!(t.regions.is_empty());
    cfg.record_regions = true;
    let t = run(&cfg, &f, &mut RngStream::new(3)).unwrap();
    assert!(!t.regions.is_empty());
    assert!(t.regions.iter().all(|r| r.density >= 2));
}

#[test]
fn mismatched_runner_is_rejected() {
    let f = BenchmarkFn::make("ellipsoid", 3).unwrap();
    let cfg = small_config(Algorithm::Sea, 10, 1, 0);
    assert!(cnea_core::engines::run_cnea(&cfg, &f, &mut RngStream::new(0)).is_err());
    assert!(cnea_core::engines::run_sea(&cfg, &f, &mut RngStream::new(0)).is_ok());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn elitism_holds_on_random_problems(
        algo_ix in 0usize..5,
        fn_ix in 0usize..7,
        seed in 0u64..1_000,
    ) {
        let algo = Algorithm::ALL[algo_ix];
        let kind = cnea_core::FunctionKind::ALL[fn_ix];
        let f = BenchmarkFn::new(kind, 4).unwrap();
        let t = run(&small_config(algo, 20, 15, seed), &f, &mut RngStream::new(seed)).unwrap();
        for pair in t.records.windows(2) {
            prop_assert!(pair[1].best_fitness <= pair[0].best_fitness);
        }
    }
}
