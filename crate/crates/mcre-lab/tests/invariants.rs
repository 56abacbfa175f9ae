//! Cross-module invariants at moderate scale.

use mcre_lab::analysis::{
    beta_mixing, ergodicity_report, stationary_direct_solve, stationary_distribution,
};
use mcre_lab::fixtures;
use mcre_lab::learner::{empirical_risk, enumerate_all_hypotheses, erm, LossFunction};
use mcre_lab::lifted::build_lifted_chain;
use mcre_lab::model::{
    AgentKernelSet, BehaviorSpace, FeedbackFunction, FeedbackSpace, McreModel, UserFactorModel,
};
use mcre_lab::sim::{empirical_transition_matrix, sample_trajectory, StartMode, TrajectoryConfig};
use mcre_lab::stochastic::tv_distance_slice;

#[test]
fn random_lifted_chains_are_row_stochastic_with_exact_structural_zeros() {
    for seed in 0..100 {
        let model = fixtures::random_model(seed, 2, 3, 2);
        let chain = build_lifted_chain(&model, false).unwrap();
        for (src, row) in chain.matrix().rows().into_iter().enumerate() {
            let sum: f64 = row.sum();
            assert!((sum - 1.0).abs() < 1e-9, "seed {seed} row {src} sums to {sum}");
            let q = chain.state(src).next_behavior;
            for (dst, &v) in row.iter().enumerate() {
                if chain.state(dst).behavior != q {
                    assert_eq!(v, 0.0, "seed {seed}: ({src},{dst}) must be a structural zero");
                }
            }
        }
    }
}

#[test]
fn two_agent_kernel_factorizes_and_matches_simulation() {
    // N=2, single user factor, eta constant: the chain runs under one fixed
    // joint feedback, so empirical joint transitions must match the tensor
    // product of the per-agent kernels.
    let b = BehaviorSpace::new(vec!["x".into(), "y".into()]).unwrap();
    let h = FeedbackSpace::new(vec!["g".into()]).unwrap();
    let u = UserFactorModel::new(vec!["u".into()], vec![1.0]).unwrap();
    let f = FeedbackFunction::new(vec![vec![0; 4]], 4, 1).unwrap();
    let k0 = ndarray::array![[0.7, 0.3], [0.4, 0.6]];
    let k1 = ndarray::array![[0.2, 0.8], [0.5, 0.5]];
    let ks = AgentKernelSet::new(vec![vec![k0.clone()], vec![k1.clone()]], 2, 1).unwrap();
    let model = McreModel::new(b, h, u, f, ks).unwrap();

    let joint = model.joint_behavior_kernel(0).unwrap();
    let bspace = model.joint_behaviors();
    for m in 0..4 {
        for n in 0..4 {
            let expected = k0[(bspace.component(m, 0), bspace.component(n, 0))]
                * k1[(bspace.component(m, 1), bspace.component(n, 1))];
            assert_eq!(joint[(m, n)], expected);
        }
    }

    let cfg = TrajectoryConfig {
        rounds: 100_000,
        seed: 2024,
        stream: 0,
        start: StartMode::Fixed { joint_behavior: 0, burn_in: 0 },
        record_users: false,
    };
    let traj = sample_trajectory(&model, &cfg, None).unwrap();
    let mut counts = vec![vec![0usize; 4]; 4];
    for z in &traj.states {
        counts[z.behavior][z.next_behavior] += 1;
    }
    for m in 0..4 {
        let total: usize = counts[m].iter().sum();
        assert!(total > 1000, "behavior {m} undervisited");
        let freq: Vec<f64> = counts[m].iter().map(|&c| c as f64 / total as f64).collect();
        let row: Vec<f64> = (0..4).map(|n| joint[(m, n)]).collect();
        let tv = tv_distance_slice(&freq, &row);
        assert!(tv <= 0.02, "behavior {m}: tv {tv}");
    }
}

#[test]
fn lifted_chain_of_assumption_passing_model_is_ergodic() {
    for seed in 0..10 {
        let model = fixtures::random_model_passing_assumptions(seed, 2, 2, 2);
        let chain = build_lifted_chain(&model, false).unwrap();
        let report = ergodicity_report(chain.matrix()).unwrap();
        assert!(report.irreducible, "seed {seed}");
        assert_eq!(report.period, Some(1), "seed {seed}");
        assert!(report.n0.is_some(), "seed {seed}");
    }
}

#[test]
fn stationary_power_iteration_agrees_with_direct_solve_on_lifted_chains() {
    for seed in [3u64, 17, 40] {
        let model = fixtures::random_model_passing_assumptions(seed, 2, 2, 2);
        let chain = build_lifted_chain(&model, false).unwrap();
        let sd = stationary_distribution(chain.matrix(), 1e-12).unwrap();
        assert!(sd.residual <= 1e-10);
        let direct = stationary_direct_solve(chain.matrix()).unwrap();
        let tv = tv_distance_slice(&sd.pi, &direct);
        assert!(tv < 1e-8, "seed {seed}: tv {tv}");
    }
}

#[test]
fn beta_profile_non_increasing_on_ergodic_fixtures() {
    for model in [fixtures::two_state_chain_model(), fixtures::toy_single_agent()] {
        let chain = build_lifted_chain(&model, true).unwrap();
        let pi = stationary_distribution(chain.matrix(), 1e-12).unwrap().pi;
        let profile = beta_mixing(chain.matrix(), &pi, 100).unwrap();
        for w in profile.betas.windows(2) {
            assert!(w[1] <= w[0] + 1e-12, "beta increased: {} -> {}", w[0], w[1]);
        }
    }
}

#[test]
fn homogeneity_rows_match_lifted_matrix_and_halves_agree() {
    let model = fixtures::toy_single_agent();
    let cfg = TrajectoryConfig {
        rounds: 60_000,
        seed: 5,
        stream: 0,
        start: StartMode::Fixed { joint_behavior: 0, burn_in: 100 },
        record_users: false,
    };
    let traj = sample_trajectory(&model, &cfg, None).unwrap();
    // the unpruned chain enumerates states in full-code order, so full
    // codes index its matrix directly
    let chain = build_lifted_chain(&model, false).unwrap();
    let z = traj.full_code_count();
    assert_eq!(z, chain.len());

    let est = empirical_transition_matrix(&traj, z).unwrap();
    let mut checked = 0;
    for (code, &visits) in est.visits.iter().enumerate() {
        if visits >= 5000 {
            let emp: Vec<f64> = (0..z).map(|c| est.matrix[(code, c)]).collect();
            let truth: Vec<f64> = (0..z).map(|c| chain.matrix()[(code, c)]).collect();
            let tv = tv_distance_slice(&emp, &truth);
            assert!(tv <= 0.05, "row {code}: tv {tv}");
            checked += 1;
        }
    }
    assert!(checked > 0, "no row reached the visit threshold");

    let first = empirical_transition_matrix(&traj.slice(0..30_000), z).unwrap();
    let second = empirical_transition_matrix(&traj.slice(30_000..60_000), z).unwrap();
    for code in 0..z {
        if first.visits[code] >= 5000 && second.visits[code] >= 5000 {
            let a: Vec<f64> = (0..z).map(|c| first.matrix[(code, c)]).collect();
            let b: Vec<f64> = (0..z).map(|c| second.matrix[(code, c)]).collect();
            let tv = tv_distance_slice(&a, &b);
            assert!(tv <= 0.05, "halves disagree on row {code}: tv {tv}");
        }
    }
}

#[test]
fn expected_risk_matches_monte_carlo_on_all_ergodic_fixtures() {
    let models = [
        ("two-state", fixtures::two_state_chain_model()),
        ("single-agent", fixtures::single_agent_fixture()),
        ("toy-1-agent", fixtures::toy_single_agent()),
        ("toy-3-level", fixtures::toy_three_level()),
    ];
    for (i, (name, model)) in models.iter().enumerate() {
        let chain = build_lifted_chain(model, true).unwrap();
        let pi = stationary_distribution(chain.matrix(), 1e-12).unwrap().pi;
        let loss = LossFunction::zero_one(model.joint_behaviors());
        let f = fixtures::stay_predictor(model);
        let exact = mcre_lab::learner::expected_risk(&f, &chain, &pi, &loss).unwrap();
        let cfg = TrajectoryConfig {
            rounds: 200_000,
            seed: 400 + i as u64,
            stream: 0,
            start: StartMode::Stationary,
            record_users: false,
        };
        let traj = sample_trajectory(model, &cfg, Some((&chain, &pi))).unwrap();
        let mc = empirical_risk(&f, &traj, &loss).unwrap();
        assert!((exact - mc).abs() < 0.01, "{name}: exact {exact} vs mc {mc}");
    }
}

#[test]
fn hamming_loss_pipeline_on_two_agent_model() {
    // per-agent Hamming loss through chain, risks and ERM on an ergodic
    // two-agent model
    let model = fixtures::random_model_passing_assumptions(7, 2, 2, 2);
    assert_eq!(model.agents(), 2, "seed chosen for a two-agent draw");
    let chain = build_lifted_chain(&model, true).unwrap();
    let pi = stationary_distribution(chain.matrix(), 1e-12).unwrap().pi;
    let loss = LossFunction::hamming(model.joint_behaviors());
    let f = fixtures::stay_predictor(&model);
    let exact = mcre_lab::learner::expected_risk(&f, &chain, &pi, &loss).unwrap();
    assert!((0.0..=1.0).contains(&exact));
    let cfg = TrajectoryConfig {
        rounds: 100_000,
        seed: 12,
        stream: 0,
        start: StartMode::Stationary,
        record_users: false,
    };
    let traj = sample_trajectory(&model, &cfg, Some((&chain, &pi))).unwrap();
    let mc = empirical_risk(&f, &traj, &loss).unwrap();
    assert!((exact - mc).abs() < 0.01, "exact {exact} vs mc {mc}");
    // hamming never exceeds zero-one on the same data
    let zo = LossFunction::zero_one(model.joint_behaviors());
    let mc_zo = empirical_risk(&f, &traj, &zo).unwrap();
    assert!(mc <= mc_zo + 1e-15);
}

#[test]
fn mixing_envelope_feeds_the_block_size_pipeline() {
    // beta profile -> algebraic envelope -> block scheme -> bound value
    let model = fixtures::toy_single_agent();
    let chain = build_lifted_chain(&model, true).unwrap();
    let pi = stationary_distribution(chain.matrix(), 1e-12).unwrap().pi;
    let profile = beta_mixing(chain.matrix(), &pi, 60).unwrap();
    let (beta0, gamma) = mcre_lab::bounds::fit_algebraic_envelope(&profile).unwrap();
    assert!(gamma > 0.0, "ergodic profile must decay");
    for (i, &b) in profile.betas.iter().enumerate() {
        let m = (i + 1) as f64;
        assert!(b <= beta0 * m.powf(-gamma) * (1.0 + 1e-12), "envelope broken at lag {m}");
    }
    let mix = mcre_lab::bounds::MixingParams { beta0, gamma, s: gamma / 2.0, c: 1.0 };
    let (scheme, corollary) = mcre_lab::bounds::optimal_block_size(&mix, 10_000).unwrap();
    assert!(scheme.tau >= 1 && scheme.usable_rounds() + scheme.discarded == 10_000);
    let value = corollary.eval(8, 1.0, 0.3, 10_000);
    assert!(value.is_finite() && value > 0.0);
}

#[test]
fn erm_beats_every_member_on_random_models() {
    for seed in [1u64, 9, 23] {
        let model = fixtures::random_model_passing_assumptions(seed, 1, 2, 2);
        let loss = LossFunction::zero_one(model.joint_behaviors());
        let class = enumerate_all_hypotheses(
            model.joint_feedbacks().count(),
            model.joint_behaviors().count(),
        )
        .unwrap();
        let cfg = TrajectoryConfig {
            rounds: 3000,
            seed,
            stream: 1,
            start: StartMode::Fixed { joint_behavior: 0, burn_in: 0 },
            record_users: false,
        };
        let traj = sample_trajectory(&model, &cfg, None).unwrap();
        let (_, best) = erm(&class, &traj, &loss).unwrap();
        for g in class.members() {
            assert!(best <= empirical_risk(g, &traj, &loss).unwrap() + 1e-15);
        }
    }
}
