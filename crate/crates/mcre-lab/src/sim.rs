//! Seeded trajectory generation.
//!
//! Each round: draw a user factor i.i.d., compute every agent's feedback
//! deterministically from the joint behavior, then let every agent sample
//! its next behavior independently from the kernel selected by its own
//! feedback. Recorded states are the lifted triples
//! `(feedback, behavior, next behavior)`.
//!
//! All randomness comes from a counter-based stream keyed by
//! `(seed, stream id)`; each round consumes a fixed number of draws, so a
//! length-`T` trajectory is a prefix of the length-`T'` trajectory for any
//! `T' > T` under the same seed.

use ndarray::Array2;

use crate::lifted::{LiftedChain, LiftedState};
use crate::model::McreModel;
use crate::rng::CounterRng;
use crate::{Error, Result};

/// How the first recorded round is initialized.
#[derive(Debug, Clone, PartialEq)]
pub enum StartMode {
    /// Draw the first lifted state from the stationary distribution.
    Stationary,
    /// Start from a fixed joint behavior and discard `burn_in` rounds.
    Fixed { joint_behavior: usize, burn_in: usize },
}

/// Default burn-in for fixed starts.
pub const DEFAULT_BURN_IN: usize = 1000;

/// Trajectory generation parameters.
#[derive(Debug, Clone)]
pub struct TrajectoryConfig {
    pub rounds: usize,
    pub seed: u64,
    /// Stream id within the seed; replicas use distinct streams.
    pub stream: u64,
    pub start: StartMode,
    pub record_users: bool,
}

impl TrajectoryConfig {
    pub fn stationary(rounds: usize, seed: u64) -> Self {
        TrajectoryConfig {
            rounds,
            seed,
            stream: 0,
            start: StartMode::Stationary,
            record_users: false,
        }
    }

    pub fn fixed(rounds: usize, seed: u64, joint_behavior: usize) -> Self {
        TrajectoryConfig {
            rounds,
            seed,
            stream: 0,
            start: StartMode::Fixed { joint_behavior, burn_in: DEFAULT_BURN_IN },
            record_users: false,
        }
    }
}

/// A recorded trajectory of lifted states, with optional user factors.
///
/// `users[t]` is `None` for the first round of a stationary start: the
/// user draw there is folded into the stationary state.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub states: Vec<LiftedState>,
    pub users: Option<Vec<Option<usize>>>,
    joint_behaviors: usize,
    joint_feedbacks: usize,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn joint_behavior_count(&self) -> usize {
        self.joint_behaviors
    }

    pub fn joint_feedback_count(&self) -> usize {
        self.joint_feedbacks
    }

    /// Full-space integer code of state `t`:
    /// `(feedback * B + behavior) * B + next_behavior`.
    pub fn full_code(&self, t: usize) -> usize {
        let s = &self.states[t];
        (s.feedback * self.joint_behaviors + s.behavior) * self.joint_behaviors + s.next_behavior
    }

    /// Sub-trajectory over a round range (used e.g. to compare first-half
    /// and second-half transition estimates).
    pub fn slice(&self, range: std::ops::Range<usize>) -> Trajectory {
        Trajectory {
            states: self.states[range.clone()].to_vec(),
            users: self.users.as_ref().map(|us| us[range].to_vec()),
            joint_behaviors: self.joint_behaviors,
            joint_feedbacks: self.joint_feedbacks,
        }
    }

    /// Number of distinct full-space codes.
    pub fn full_code_count(&self) -> usize {
        self.joint_feedbacks * self.joint_behaviors * self.joint_behaviors
    }
}

/// Draw one lifted state from `pi` over the chain's states.
pub fn sample_stationary_start(chain: &LiftedChain, pi: &[f64], rng: &mut CounterRng) -> Result<LiftedState> {
    if pi.len() != chain.len() {
        return Err(Error::Dimension(format!(
            "pi has length {}, chain has {} states",
            pi.len(),
            chain.len()
        )));
    }
    Ok(chain.state(rng.sample(pi)))
}

/// Generate a trajectory. The stationary variant needs the chain and its
/// stationary distribution to draw the first state; pass `None` for fixed
/// starts.
///
/// Every round consumes exactly `1 + N` draws (one user factor, one per
/// agent), which is what makes shorter trajectories prefixes of longer ones.
pub fn sample_trajectory(
    model: &McreModel,
    cfg: &TrajectoryConfig,
    stationary: Option<(&LiftedChain, &[f64])>,
) -> Result<Trajectory> {
    if cfg.rounds == 0 {
        return Err(Error::InvalidArgument("rounds must be >= 1".into()));
    }
    let mut rng = CounterRng::from_stream(cfg.seed, cfg.stream);
    let bspace = model.joint_behaviors();

    let mut states = Vec::with_capacity(cfg.rounds);
    let mut users: Vec<Option<usize>> = Vec::new();

    // Current joint behavior entering the next generative round.
    let mut behavior;
    match &cfg.start {
        StartMode::Stationary => {
            let (chain, pi) = stationary.ok_or_else(|| {
                Error::InvalidArgument("stationary start requires chain and pi".into())
            })?;
            let z0 = sample_stationary_start(chain, pi, &mut rng)?;
            states.push(z0);
            users.push(None);
            behavior = z0.next_behavior;
        }
        StartMode::Fixed { joint_behavior, burn_in } => {
            if *joint_behavior >= bspace.count() {
                return Err(Error::Dimension(format!(
                    "start behavior {joint_behavior} out of range 0..{}",
                    bspace.count()
                )));
            }
            behavior = *joint_behavior;
            for _ in 0..*burn_in {
                let (_, _, next) = generative_round(model, behavior, &mut rng)?;
                behavior = next;
            }
        }
    }

    while states.len() < cfg.rounds {
        let (u, feedback, next) = generative_round(model, behavior, &mut rng)?;
        states.push(LiftedState { feedback, behavior, next_behavior: next });
        users.push(Some(u));
        behavior = next;
    }

    Ok(Trajectory {
        states,
        users: cfg.record_users.then_some(users),
        joint_behaviors: bspace.count(),
        joint_feedbacks: model.joint_feedbacks().count(),
    })
}

/// One generative round from joint behavior `m`: returns
/// `(user factor, joint feedback, next joint behavior)`.
fn generative_round(model: &McreModel, m: usize, rng: &mut CounterRng) -> Result<(usize, usize, usize)> {
    let u = rng.sample(model.user_model().probs());
    let feedback = model.feedback_fn().eval(u, m);
    let fspace = model.joint_feedbacks();
    let bspace = model.joint_behaviors();
    let mut components = Vec::with_capacity(model.agents());
    for agent in 0..model.agents() {
        let k_i = fspace.component(feedback, agent);
        let m_i = bspace.component(m, agent);
        let kernel = model.kernel_set().kernel(agent, k_i);
        let row = kernel.row(m_i);
        components.push(rng.sample(row.as_slice().unwrap()));
    }
    let next = bspace.encode(&components)?;
    Ok((u, feedback, next))
}

/// Counts of observed transitions between full-space codes, row-normalized
/// where visited.
#[derive(Debug, Clone)]
pub struct EmpiricalTransitions {
    /// Row-normalized estimate; rows with zero visits are left all-zero.
    pub matrix: Array2<f64>,
    /// Outgoing-transition count per source state.
    pub visits: Vec<usize>,
}

/// Row-normalized counts of observed state transitions over `z` codes.
pub fn empirical_transition_matrix(traj: &Trajectory, z: usize) -> Result<EmpiricalTransitions> {
    if traj.len() < 2 {
        return Err(Error::InvalidArgument(
            "empirical transition matrix needs at least 2 rounds".into(),
        ));
    }
    let mut counts = Array2::<f64>::zeros((z, z));
    let mut visits = vec![0usize; z];
    for t in 0..traj.len() - 1 {
        let a = traj.full_code(t);
        let b = traj.full_code(t + 1);
        if a >= z || b >= z {
            return Err(Error::Dimension(format!(
                "state code {} out of range 0..{z}",
                a.max(b)
            )));
        }
        counts[(a, b)] += 1.0;
        visits[a] += 1;
    }
    for (i, &v) in visits.iter().enumerate() {
        if v > 0 {
            // division keeps deterministic rows at exact 0/1
            for j in 0..z {
                counts[(i, j)] /= v as f64;
            }
        }
    }
    Ok(EmpiricalTransitions { matrix: counts, visits })
}
