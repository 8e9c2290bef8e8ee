use sea_core::experiments::{run_batch, write_batch_csv, write_trace_csv};
use sea_core::ga::run_sga;
use sea_core::sea::run_sea;
use sea_core::{
    Algorithm, CodingState, GaConfig, Overrides, Preset, Problem, ProblemKind, RunConfig, SeaConfig,
};

fn small_ga(max_gen: u32) -> GaConfig {
    GaConfig {
        max_gen,
        pop_size: 20,
        blocks_n: 30,
        block_k: 3,
        t_size: 2,
        p_cross: 0.6,
        p_mut: 1.0,
        p_mut_per_bit: 0.02,
        elitism: true,
    }
}

#[test]
fn dumped_preset_reproduces_runs() {
    for preset in [Preset::PaperP1, Preset::PaperP3] {
        let mut cfg = preset.expand();
        cfg.max_gen = 30;
        cfg.runs = 3;
        let reloaded = RunConfig::resolve(None, &Overrides::parse(&cfg.to_kv()).unwrap());
        let a = run_batch(
            Algorithm::Sea,
            &cfg.sea_config(),
            &cfg.problem().unwrap(),
            cfg.runs,
            cfg.seed,
        )
        .unwrap();
        let b = run_batch(
            Algorithm::Sea,
            &reloaded.sea_config(),
            &reloaded.problem().unwrap(),
            reloaded.runs,
            reloaded.seed,
        )
        .unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn single_state_sea_matches_sga_success_rate() {
    let problem = Problem::new(ProblemKind::OneMax, 30).unwrap();
    let ga = small_ga(100);
    let frozen = SeaConfig {
        ga: ga.clone(),
        states: vec![CodingState::One],
        p_mut_state: 0.0,
    };
    let sea = run_batch(Algorithm::Sea, &frozen, &problem, 100, 5).unwrap();
    let sga = run_batch(Algorithm::Sga, &frozen, &problem, 100, 6).unwrap();
    assert!(
        (sea.sr_percent - sga.sr_percent).abs() <= 10.0,
        "sea {} vs sga {}",
        sea.sr_percent,
        sga.sr_percent
    );

    let two_state_still = SeaConfig::two_state(ga, 0.0);
    let r = run_batch(Algorithm::Sea, &two_state_still, &problem, 100, 5).unwrap();
    assert!((r.sr_percent - sga.sr_percent).abs() <= 10.0);
}

#[test]
fn tuned_sea_solves_onemax_quickly() {
    let cfg = Preset::PaperP1.expand();
    let r = run_sea(&cfg.sea_config(), &cfg.problem().unwrap(), 17).unwrap();
    assert!(r.success);
    assert!(r.gen_to_opt.unwrap() < 50);
    assert_eq!(r.state_counts.len(), r.best_curve.len());
    assert!(r.state_counts.iter().all(|c| c[0] + c[1] == 100));
}

#[test]
fn records_are_monotone_and_bounded() {
    let problem = Problem::new(ProblemKind::OnOff, 30).unwrap();
    let cfg = SeaConfig::two_state(small_ga(200), 0.85);
    for seed in 0..5 {
        for r in [
            run_sea(&cfg, &problem, seed).unwrap(),
            run_sga(&cfg.ga, &problem, seed).unwrap(),
        ] {
            assert!(
                r.best_curve.windows(2).all(|w| w[1] <= w[0]),
                "minimisation curve rose"
            );
            assert!(r.best_curve.len() as u32 <= r.max_gen + 1);
            assert_eq!(r.success, r.gen_to_opt.is_some());
            if let Some(g) = r.gen_to_opt {
                assert_eq!(r.best_curve.len() as u32, g + 1);
                assert!(problem.is_optimal(r.final_best()));
            }
        }
    }
}

#[test]
fn csv_outputs_have_one_header_and_one_line_per_row() {
    let problem = Problem::new(ProblemKind::OneMax, 30).unwrap();
    let cfg = SeaConfig::two_state(small_ga(15), 1.0);
    let report = run_batch(Algorithm::Sea, &cfg, &problem, 4, 9).unwrap();

    let mut buf = Vec::new();
    write_batch_csv(&report, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert_eq!(text.lines().count(), 5);

    let mut buf = Vec::new();
    write_trace_csv(&report.per_run[0], &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert_eq!(
        text.lines().next(),
        Some("generation,best_fitness,state_0,state_1")
    );
    assert_eq!(text.lines().count(), report.per_run[0].best_curve.len() + 1);
}
