//! Named fixture models and seeded random model generators.
//!
//! The verification harness needs families of small models with known
//! properties: fixed fixtures for regression values, random models for
//! structural invariants, and random models built to satisfy the two
//! ergodicity assumptions by construction.

use ndarray::Array2;

use crate::learner::{enumerate_all_hypotheses, Hypothesis, HypothesisClass};
use crate::model::{
    AgentKernelSet, BehaviorSpace, FeedbackFunction, FeedbackSpace, McreModel, UserFactorModel,
};
use crate::rng::CounterRng;
use crate::scenario::{toy_sponsored_search, ScenarioSpec};
use crate::space::JointSpace;

/// The sticky two-state kernel used across tests: stationary distribution
/// (2/3, 1/3), second eigenvalue 0.7.
pub fn two_state_kernel() -> Array2<f64> {
    ndarray::array![[0.9, 0.1], [0.2, 0.8]]
}

/// Single-agent model with one feedback value wrapping [`two_state_kernel`].
pub fn two_state_chain_model() -> McreModel {
    single_feedback_model(two_state_kernel())
}

/// Single-agent, single-feedback fixture whose lifted chain has `Z = 4`,
/// primitivity index 2 and `delta = 0.18`, large enough for informative
/// pointwise bounds at desk-scale grids.
pub fn single_agent_fixture() -> McreModel {
    single_feedback_model(ndarray::array![[0.6, 0.4], [0.45, 0.55]])
}

/// One behavior, one feedback, one user factor: the lifted chain is a
/// single absorbing state.
pub fn degenerate_orbit() -> McreModel {
    single_feedback_model(ndarray::array![[1.0]])
}

/// Wrap a kernel into a model with a single feedback value and a single
/// user factor.
pub fn single_feedback_model(kernel: Array2<f64>) -> McreModel {
    let nb = kernel.nrows();
    let labels: Vec<String> = (0..nb).map(|i| format!("b{i}")).collect();
    let b = BehaviorSpace::new(labels).unwrap();
    let h = FeedbackSpace::new(vec!["k".into()]).unwrap();
    let u = UserFactorModel::new(vec!["u".into()], vec![1.0]).unwrap();
    let f = FeedbackFunction::new(vec![vec![0; nb]], nb, 1).unwrap();
    let ks = AgentKernelSet::new(vec![vec![kernel]], nb, 1).unwrap();
    McreModel::new(b, h, u, f, ks).unwrap()
}

/// Toy sponsored-search model: one advertiser, two bid levels, clicker /
/// ignorer users, two KPI levels. Passes both ergodicity assumptions.
pub fn toy_single_agent() -> McreModel {
    toy_sponsored_search(&ScenarioSpec {
        agents: 1,
        bid_levels: 2,
        click_pattern_probs: vec![0.3, 0.7],
        kpi_levels: 2,
    })
    .unwrap()
}

/// Toy sponsored-search model with three bid levels: its bid-adjustment
/// kernels have structural zeros (no two-level jumps), so the full lifted
/// chain needs pruning before ergodic analysis.
pub fn toy_three_level() -> McreModel {
    toy_sponsored_search(&ScenarioSpec {
        agents: 1,
        bid_levels: 3,
        click_pattern_probs: vec![0.4, 0.6],
        kpi_levels: 2,
    })
    .unwrap()
}

/// Two-advertiser toy model (KPIs include `lost`).
pub fn toy_two_agents() -> McreModel {
    toy_sponsored_search(&ScenarioSpec {
        agents: 2,
        bid_levels: 2,
        click_pattern_probs: vec![0.4, 0.6],
        kpi_levels: 3,
    })
    .unwrap()
}

/// Predictor that repeats the current joint behavior regardless of
/// feedback.
pub fn stay_predictor(model: &McreModel) -> Hypothesis {
    let nh = model.joint_feedbacks().count();
    let nb = model.joint_behaviors().count();
    let mut table = Vec::with_capacity(nh * nb);
    for _ in 0..nh {
        for b in 0..nb {
            table.push(b);
        }
    }
    Hypothesis::new(table, nh, nb).unwrap()
}

/// Eight distinct tabular hypotheses over a model with a 4-pair domain
/// (the first eight tables in enumeration order).
pub fn toy_eight_member_class(model: &McreModel) -> HypothesisClass {
    let all = enumerate_all_hypotheses(
        model.joint_feedbacks().count(),
        model.joint_behaviors().count(),
    )
    .unwrap();
    HypothesisClass::new(all.members()[..8].to_vec()).unwrap()
}

fn random_probs(rng: &mut CounterRng, len: usize, min: f64) -> Vec<f64> {
    let mut v: Vec<f64> = (0..len).map(|_| min + rng.next_f64()).collect();
    let total: f64 = v.iter().sum();
    for p in &mut v {
        *p /= total;
    }
    v
}

/// A random valid model with `1..=max_agents` agents, `1..=max_behaviors`
/// behaviors and `1..=max_feedbacks` feedback values per agent. Kernel
/// rows occasionally contain exact zeros to exercise structural-zero
/// handling; no ergodicity property is guaranteed.
pub fn random_model(seed: u64, max_agents: usize, max_behaviors: usize, max_feedbacks: usize) -> McreModel {
    let mut rng = CounterRng::from_stream(seed, 0xF1);
    let agents = 1 + (rng.next_u64() as usize) % max_agents;
    let nb = 1 + (rng.next_u64() as usize) % max_behaviors;
    let nh = 1 + (rng.next_u64() as usize) % max_feedbacks;
    let nu = 1 + (rng.next_u64() as usize) % 4;

    let b = BehaviorSpace::new((0..nb).map(|i| format!("b{i}")).collect()).unwrap();
    let h = FeedbackSpace::new((0..nh).map(|i| format!("h{i}")).collect()).unwrap();
    let u = UserFactorModel::new(
        (0..nu).map(|i| format!("u{i}")).collect(),
        random_probs(&mut rng, nu, 0.05),
    )
    .unwrap();

    let joint_b = JointSpace::new(nb, agents).unwrap();
    let joint_h = JointSpace::new(nh, agents).unwrap();
    let table: Vec<Vec<usize>> = (0..nu)
        .map(|_| (0..joint_b.count()).map(|_| (rng.next_u64() as usize) % joint_h.count()).collect())
        .collect();
    let f = FeedbackFunction::new(table, joint_b.count(), joint_h.count()).unwrap();

    let mut kernels = Vec::with_capacity(agents);
    for _ in 0..agents {
        let mut per_feedback = Vec::with_capacity(nh);
        for _ in 0..nh {
            let mut k = Array2::zeros((nb, nb));
            for row in 0..nb {
                let mut weights: Vec<f64> = (0..nb).map(|_| rng.next_f64()).collect();
                // knock one entry to exact zero now and then
                if nb > 1 && rng.next_f64() < 0.3 {
                    let j = (rng.next_u64() as usize) % nb;
                    weights[j] = 0.0;
                }
                let total: f64 = weights.iter().sum();
                if total == 0.0 {
                    weights[0] = 1.0;
                }
                let total: f64 = weights.iter().sum();
                for (col, w) in weights.iter().enumerate() {
                    k[(row, col)] = w / total;
                }
            }
            per_feedback.push(k);
        }
        kernels.push(per_feedback);
    }
    let ks = AgentKernelSet::new(kernels, nb, nh).unwrap();
    McreModel::new(b, h, u, f, ks).unwrap()
}

/// A random model satisfying both ergodicity assumptions by construction:
/// every kernel entry is positive (each per-feedback chain is irreducible
/// and aperiodic), and the user space has one factor per joint feedback
/// with the feedback function a per-behavior bijection between factors and
/// joint feedbacks (every feedback reachable from every behavior).
pub fn random_model_passing_assumptions(
    seed: u64,
    max_agents: usize,
    max_behaviors: usize,
    max_feedbacks: usize,
) -> McreModel {
    let mut rng = CounterRng::from_stream(seed, 0xA2);
    let agents = 1 + (rng.next_u64() as usize) % max_agents;
    let nb = 1 + (rng.next_u64() as usize) % max_behaviors;
    let nh = 1 + (rng.next_u64() as usize) % max_feedbacks;

    let b = BehaviorSpace::new((0..nb).map(|i| format!("b{i}")).collect()).unwrap();
    let h = FeedbackSpace::new((0..nh).map(|i| format!("h{i}")).collect()).unwrap();

    let joint_b = JointSpace::new(nb, agents).unwrap();
    let joint_h = JointSpace::new(nh, agents).unwrap();
    let nu = joint_h.count();
    let u = UserFactorModel::new(
        (0..nu).map(|i| format!("u{i}")).collect(),
        random_probs(&mut rng, nu, 0.2),
    )
    .unwrap();

    // factor j at behavior m produces feedback (j + shift_m) mod nu:
    // a bijection per behavior, so every feedback has positive mass.
    let shifts: Vec<usize> = (0..joint_b.count()).map(|_| (rng.next_u64() as usize) % nu).collect();
    let table: Vec<Vec<usize>> = (0..nu)
        .map(|j| (0..joint_b.count()).map(|m| (j + shifts[m]) % nu).collect())
        .collect();
    let f = FeedbackFunction::new(table, joint_b.count(), joint_h.count()).unwrap();

    let mut kernels = Vec::with_capacity(agents);
    for _ in 0..agents {
        let mut per_feedback = Vec::with_capacity(nh);
        for _ in 0..nh {
            let mut k = Array2::zeros((nb, nb));
            for row in 0..nb {
                let weights = random_probs(&mut rng, nb, 0.1);
                for (col, w) in weights.iter().enumerate() {
                    k[(row, col)] = *w;
                }
            }
            per_feedback.push(k);
        }
        kernels.push(per_feedback);
    }
    let ks = AgentKernelSet::new(kernels, nb, nh).unwrap();
    McreModel::new(b, h, u, f, ks).unwrap()
}
