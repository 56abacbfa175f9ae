//! The lifted time-homogeneous chain over `(feedback, behavior, next
//! behavior)` triples.
//!
//! The behavior process alone is a Markov chain in a random environment:
//! its one-step kernel depends on the feedback drawn each round. Grouping
//! the correlated variables into a triple state removes the
//! inhomogeneity. The transition probability from `(j, p, q)` to
//! `(k, m, n)` is
//!
//! ```text
//!   0                        if m != q
//!   q(k | m) * M_k(m, n)     if m == q
//! ```
//!
//! where `q(k|m)` is the induced feedback distribution and `M_k` the joint
//! behavior kernel under feedback `k`. The zero for `m != q` is structural:
//! it is written as exact 0.0, never as a rounded product.

use std::collections::HashMap;

use ndarray::Array2;

use crate::model::McreModel;
use crate::{Error, Result};

/// Default cap on the number of lifted states materialized densely.
pub const DEFAULT_STATE_CAP: usize = 20_000;

/// One state of the lifted chain: joint feedback, joint behavior, and the
/// joint behavior of the following round (all as joint indices).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LiftedState {
    pub feedback: usize,
    pub behavior: usize,
    pub next_behavior: usize,
}

/// The lifted chain: enumerated states, its dense row-stochastic transition
/// matrix, and state<->index maps.
#[derive(Debug, Clone)]
pub struct LiftedChain {
    states: Vec<LiftedState>,
    matrix: Array2<f64>,
    index: HashMap<LiftedState, usize>,
    /// Kernel mass `M_k(m, n)` of each state `(k, m, n)`; zero entries mark
    /// states that can never be entered and may be pruned.
    kernel_mass: Vec<f64>,
    joint_behaviors: usize,
    joint_feedbacks: usize,
}

impl LiftedChain {
    /// Number of states `Z`.
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[LiftedState] {
        &self.states
    }

    pub fn state(&self, idx: usize) -> LiftedState {
        self.states[idx]
    }

    pub fn matrix(&self) -> &Array2<f64> {
        &self.matrix
    }

    /// Index of a state, if present (pruned states are absent).
    pub fn index_of(&self, state: &LiftedState) -> Option<usize> {
        self.index.get(state).copied()
    }

    pub fn joint_behavior_count(&self) -> usize {
        self.joint_behaviors
    }

    pub fn joint_feedback_count(&self) -> usize {
        self.joint_feedbacks
    }

    /// Kernel mass `M_k(m,n)` recorded for each state.
    pub fn kernel_mass(&self) -> &[f64] {
        &self.kernel_mass
    }
}

/// Build the lifted chain of a model, enumerating
/// `feedbacks^N x behaviors^N x behaviors^N` states in lexicographic order
/// of `(feedback, behavior, next behavior)`.
///
/// With `prune` set, states whose kernel mass is exactly zero are erased
/// (see [`prune_states`]). Fails if the state count exceeds
/// [`DEFAULT_STATE_CAP`]; use [`build_lifted_chain_with_cap`] to override.
pub fn build_lifted_chain(model: &McreModel, prune: bool) -> Result<LiftedChain> {
    build_lifted_chain_with_cap(model, prune, DEFAULT_STATE_CAP)
}

/// As [`build_lifted_chain`] with an explicit state cap.
pub fn build_lifted_chain_with_cap(model: &McreModel, prune: bool, cap: usize) -> Result<LiftedChain> {
    let nb = model.joint_behaviors().count();
    let nh = model.joint_feedbacks().count();
    let z = nh
        .checked_mul(nb)
        .and_then(|v| v.checked_mul(nb))
        .ok_or_else(|| Error::Dimension("lifted state count overflows usize".into()))?;
    if z > cap {
        return Err(Error::StateCap { states: z, cap });
    }

    // q(k|m) for all m, and the joint kernel for all k.
    let mut feedback_dist = Vec::with_capacity(nb);
    for m in 0..nb {
        feedback_dist.push(model.induced_feedback_distribution(m)?);
    }
    let mut joint_kernels = Vec::with_capacity(nh);
    for k in 0..nh {
        joint_kernels.push(model.joint_behavior_kernel(k)?);
    }

    let mut states = Vec::with_capacity(z);
    let mut kernel_mass = Vec::with_capacity(z);
    for k in 0..nh {
        for m in 0..nb {
            for n in 0..nb {
                states.push(LiftedState { feedback: k, behavior: m, next_behavior: n });
                kernel_mass.push(joint_kernels[k][(m, n)]);
            }
        }
    }

    // Destination (k, m, n) is column ((k * nb) + m) * nb + n; a source
    // (j, p, q) only reaches columns with m == q, independent of (j, p).
    let mut matrix = Array2::zeros((z, z));
    for (src, s) in states.iter().enumerate() {
        let q = s.next_behavior;
        for k in 0..nh {
            let qk = feedback_dist[q][k];
            if qk == 0.0 {
                continue;
            }
            let base = (k * nb + q) * nb;
            for n in 0..nb {
                let mass = joint_kernels[k][(q, n)];
                if mass != 0.0 {
                    matrix[(src, base + n)] = qk * mass;
                }
            }
        }
    }

    let index = states.iter().enumerate().map(|(i, s)| (*s, i)).collect();
    let chain = LiftedChain {
        states,
        matrix,
        index,
        kernel_mass,
        joint_behaviors: nb,
        joint_feedbacks: nh,
    };
    if prune {
        prune_states(&chain)
    } else {
        Ok(chain)
    }
}

/// Erase states whose kernel mass `M_k(m, n)` is exactly zero.
///
/// Such states receive zero inbound probability from every state (their
/// column is identically zero), so removing them keeps every remaining row
/// stochastic without renormalization. Indices are remapped to the
/// surviving states in their original order.
pub fn prune_states(chain: &LiftedChain) -> Result<LiftedChain> {
    let keep: Vec<usize> = (0..chain.len()).filter(|&i| chain.kernel_mass[i] > 0.0).collect();
    if keep.is_empty() {
        return Err(Error::Model("pruning would empty the lifted state space".into()));
    }
    if keep.len() == chain.len() {
        return Ok(chain.clone());
    }
    let states: Vec<LiftedState> = keep.iter().map(|&i| chain.states[i]).collect();
    let kernel_mass: Vec<f64> = keep.iter().map(|&i| chain.kernel_mass[i]).collect();
    let z = keep.len();
    let mut matrix = Array2::zeros((z, z));
    for (r, &old_r) in keep.iter().enumerate() {
        for (c, &old_c) in keep.iter().enumerate() {
            matrix[(r, c)] = chain.matrix[(old_r, old_c)];
        }
    }
    let index = states.iter().enumerate().map(|(i, s)| (*s, i)).collect();
    Ok(LiftedChain {
        states,
        matrix,
        index,
        kernel_mass,
        joint_behaviors: chain.joint_behaviors,
        joint_feedbacks: chain.joint_feedbacks,
    })
}
