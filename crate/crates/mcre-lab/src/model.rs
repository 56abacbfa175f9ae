//! The generative model: behavior/feedback spaces, user factors, the
//! deterministic feedback function, and per-agent feedback-indexed
//! transition kernels.
//!
//! Each round, a user factor `u` arrives i.i.d., every agent `i` receives
//! feedback `h_i = feedback(u, joint behavior)`, and independently moves to
//! its next behavior according to the kernel selected by `h_i`. Joint
//! behaviors and joint feedbacks are stored as mixed-radix indices (see
//! [`crate::space::JointSpace`]).

use ndarray::Array2;

use crate::space::JointSpace;
use crate::stochastic::{check_probability_vector, check_row_stochastic, INPUT_TOL};
use crate::{Error, Result};

/// Ordered per-agent behavior symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BehaviorSpace {
    labels: Vec<String>,
}

/// Ordered per-agent feedback symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeedbackSpace {
    labels: Vec<String>,
}

fn check_labels(labels: &[String], what: &str) -> Result<()> {
    if labels.is_empty() {
        return Err(Error::Model(format!("{what}: needs at least one label")));
    }
    for (i, a) in labels.iter().enumerate() {
        if a.is_empty() {
            return Err(Error::Model(format!("{what}: empty label at index {i}")));
        }
        // ',' joins joint labels and '|' separates key parts in the file
        // formats; labels containing them would be ambiguous.
        if a.contains(',') || a.contains('|') {
            return Err(Error::Model(format!("{what}: label {a:?} may not contain ',' or '|'")));
        }
        for b in &labels[i + 1..] {
            if a == b {
                return Err(Error::Model(format!("{what}: duplicate label {a:?}")));
            }
        }
    }
    Ok(())
}

impl BehaviorSpace {
    pub fn new(labels: Vec<String>) -> Result<Self> {
        check_labels(&labels, "behavior space")?;
        Ok(BehaviorSpace { labels })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

impl FeedbackSpace {
    pub fn new(labels: Vec<String>) -> Result<Self> {
        check_labels(&labels, "feedback space")?;
        Ok(FeedbackSpace { labels })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

/// Finite user-factor distribution: the i.i.d. randomness injected by the
/// platform's users each round.
#[derive(Debug, Clone, PartialEq)]
pub struct UserFactorModel {
    factors: Vec<String>,
    probs: Vec<f64>,
}

impl UserFactorModel {
    pub fn new(factors: Vec<String>, probs: Vec<f64>) -> Result<Self> {
        check_labels(&factors, "user factors")?;
        if factors.len() != probs.len() {
            return Err(Error::Model(format!(
                "user factors: {} labels but {} probabilities",
                factors.len(),
                probs.len()
            )));
        }
        check_probability_vector(&probs, INPUT_TOL, "user factor probabilities")?;
        Ok(UserFactorModel { factors, probs })
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn factors(&self) -> &[String] {
        &self.factors
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.factors.iter().position(|l| l == label)
    }
}

/// Deterministic total map `(user factor, joint behavior) -> joint feedback`.
///
/// `table[u][m]` is the joint feedback index produced when factor `u`
/// arrives while the agents hold joint behavior `m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeedbackFunction {
    table: Vec<Vec<usize>>,
    joint_behaviors: usize,
    joint_feedbacks: usize,
}

impl FeedbackFunction {
    pub fn new(table: Vec<Vec<usize>>, joint_behaviors: usize, joint_feedbacks: usize) -> Result<Self> {
        if table.is_empty() {
            return Err(Error::Model("feedback function: empty table".into()));
        }
        for (u, row) in table.iter().enumerate() {
            if row.len() != joint_behaviors {
                return Err(Error::Model(format!(
                    "feedback function: factor {u} covers {} joint behaviors, expected {joint_behaviors}",
                    row.len()
                )));
            }
            for (m, &k) in row.iter().enumerate() {
                if k >= joint_feedbacks {
                    return Err(Error::Model(format!(
                        "feedback function: output {k} at (factor {u}, behavior {m}) out of range 0..{joint_feedbacks}"
                    )));
                }
            }
        }
        Ok(FeedbackFunction { table, joint_behaviors, joint_feedbacks })
    }

    /// Joint feedback for `(factor, joint behavior)`.
    pub fn eval(&self, factor: usize, joint_behavior: usize) -> usize {
        self.table[factor][joint_behavior]
    }

    pub fn factor_count(&self) -> usize {
        self.table.len()
    }
}

/// Per-agent, per-feedback-value behavior transition kernels.
///
/// `kernel(agent, feedback)` is the row-stochastic matrix governing that
/// agent's next behavior when it receives that per-agent feedback value.
#[derive(Debug, Clone, PartialEq)]
pub struct AgentKernelSet {
    kernels: Vec<Vec<Array2<f64>>>,
    behaviors: usize,
    feedbacks: usize,
}

impl AgentKernelSet {
    pub fn new(kernels: Vec<Vec<Array2<f64>>>, behaviors: usize, feedbacks: usize) -> Result<Self> {
        if kernels.is_empty() {
            return Err(Error::Model("kernel set: no agents".into()));
        }
        for (i, per_feedback) in kernels.iter().enumerate() {
            if per_feedback.len() != feedbacks {
                return Err(Error::Model(format!(
                    "kernel set: agent {i} has {} kernels, expected one per feedback value ({feedbacks})",
                    per_feedback.len()
                )));
            }
            for (k, m) in per_feedback.iter().enumerate() {
                if m.nrows() != behaviors || m.ncols() != behaviors {
                    return Err(Error::Model(format!(
                        "kernel set: agent {i} feedback {k} is {}x{}, expected {behaviors}x{behaviors}",
                        m.nrows(),
                        m.ncols()
                    )));
                }
                check_row_stochastic(m, INPUT_TOL, &format!("agent {i} feedback {k} kernel"))?;
            }
        }
        Ok(AgentKernelSet { kernels, behaviors, feedbacks })
    }

    pub fn agent_count(&self) -> usize {
        self.kernels.len()
    }

    pub fn behavior_count(&self) -> usize {
        self.behaviors
    }

    pub fn feedback_count(&self) -> usize {
        self.feedbacks
    }

    pub fn kernel(&self, agent: usize, feedback: usize) -> &Array2<f64> {
        &self.kernels[agent][feedback]
    }

    /// Joint one-step kernel over `{behaviors}^N` under joint feedback `k`:
    /// the tensor product of the per-agent kernels selected by each agent's
    /// component of `k`.
    pub fn joint_behavior_kernel(&self, joint_feedback: usize) -> Result<Array2<f64>> {
        let n = self.agent_count();
        let fspace = JointSpace::new(self.feedbacks, n)?;
        let bspace = JointSpace::new(self.behaviors, n)?;
        if joint_feedback >= fspace.count() {
            return Err(Error::Dimension(format!(
                "joint feedback {joint_feedback} out of range 0..{}",
                fspace.count()
            )));
        }
        let size = bspace.count();
        let mut out = Array2::zeros((size, size));
        for m in 0..size {
            for next in 0..size {
                let mut p = 1.0;
                for agent in 0..n {
                    let ki = fspace.component(joint_feedback, agent);
                    let mi = bspace.component(m, agent);
                    let ni = bspace.component(next, agent);
                    p *= self.kernels[agent][ki][(mi, ni)];
                    if p == 0.0 {
                        break;
                    }
                }
                out[(m, next)] = p;
            }
        }
        Ok(out)
    }
}

/// The full generative specification.
#[derive(Debug, Clone)]
pub struct McreModel {
    behavior_space: BehaviorSpace,
    feedback_space: FeedbackSpace,
    user_model: UserFactorModel,
    feedback_fn: FeedbackFunction,
    kernel_set: AgentKernelSet,
    agents: usize,
    joint_behaviors: JointSpace,
    joint_feedbacks: JointSpace,
}

impl McreModel {
    pub fn new(
        behavior_space: BehaviorSpace,
        feedback_space: FeedbackSpace,
        user_model: UserFactorModel,
        feedback_fn: FeedbackFunction,
        kernel_set: AgentKernelSet,
    ) -> Result<Self> {
        let agents = kernel_set.agent_count();
        if kernel_set.behavior_count() != behavior_space.len() {
            return Err(Error::Model(format!(
                "kernels are over {} behaviors but the behavior space has {}",
                kernel_set.behavior_count(),
                behavior_space.len()
            )));
        }
        if kernel_set.feedback_count() != feedback_space.len() {
            return Err(Error::Model(format!(
                "kernels are indexed by {} feedback values but the feedback space has {}",
                kernel_set.feedback_count(),
                feedback_space.len()
            )));
        }
        let joint_behaviors = JointSpace::new(behavior_space.len(), agents)?;
        let joint_feedbacks = JointSpace::new(feedback_space.len(), agents)?;
        if feedback_fn.factor_count() != user_model.len() {
            return Err(Error::Model(format!(
                "feedback table covers {} user factors but the user model has {}",
                feedback_fn.factor_count(),
                user_model.len()
            )));
        }
        if feedback_fn.joint_behaviors != joint_behaviors.count()
            || feedback_fn.joint_feedbacks != joint_feedbacks.count()
        {
            return Err(Error::Model(
                "feedback table dimensions do not match the joint spaces".into(),
            ));
        }
        Ok(McreModel {
            behavior_space,
            feedback_space,
            user_model,
            feedback_fn,
            kernel_set,
            agents,
            joint_behaviors,
            joint_feedbacks,
        })
    }

    pub fn agents(&self) -> usize {
        self.agents
    }

    pub fn behavior_space(&self) -> &BehaviorSpace {
        &self.behavior_space
    }

    pub fn feedback_space(&self) -> &FeedbackSpace {
        &self.feedback_space
    }

    pub fn user_model(&self) -> &UserFactorModel {
        &self.user_model
    }

    pub fn feedback_fn(&self) -> &FeedbackFunction {
        &self.feedback_fn
    }

    pub fn kernel_set(&self) -> &AgentKernelSet {
        &self.kernel_set
    }

    /// Codec for joint behaviors.
    pub fn joint_behaviors(&self) -> JointSpace {
        self.joint_behaviors
    }

    /// Codec for joint feedbacks.
    pub fn joint_feedbacks(&self) -> JointSpace {
        self.joint_feedbacks
    }

    /// Distribution of the joint feedback given joint behavior `m`: entry
    /// `k` is the total user-factor mass mapped to `k` by the feedback
    /// function when the agents hold `m`.
    pub fn induced_feedback_distribution(&self, joint_behavior: usize) -> Result<Vec<f64>> {
        if joint_behavior >= self.joint_behaviors.count() {
            return Err(Error::Dimension(format!(
                "joint behavior {joint_behavior} out of range 0..{}",
                self.joint_behaviors.count()
            )));
        }
        let mut q = vec![0.0; self.joint_feedbacks.count()];
        for (u, &pu) in self.user_model.probs().iter().enumerate() {
            q[self.feedback_fn.eval(u, joint_behavior)] += pu;
        }
        Ok(q)
    }

    /// Joint behavior kernel under joint feedback `k`.
    pub fn joint_behavior_kernel(&self, joint_feedback: usize) -> Result<Array2<f64>> {
        self.kernel_set.joint_behavior_kernel(joint_feedback)
    }

    /// Human-readable joint behavior label, components comma-joined.
    pub fn behavior_label(&self, joint_behavior: usize) -> String {
        self.joint_behaviors
            .decode(joint_behavior)
            .iter()
            .map(|&c| self.behavior_space.labels()[c].as_str())
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Human-readable joint feedback label, components comma-joined.
    pub fn feedback_label(&self, joint_feedback: usize) -> String {
        self.joint_feedbacks
            .decode(joint_feedback)
            .iter()
            .map(|&c| self.feedback_space.labels()[c].as_str())
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Parse a comma-joined joint behavior label.
    pub fn behavior_index(&self, label: &str) -> Result<usize> {
        let comps: Vec<usize> = label
            .split(',')
            .map(|part| {
                self.behavior_space
                    .index_of(part)
                    .ok_or_else(|| Error::InvalidArgument(format!("unknown behavior label {part:?}")))
            })
            .collect::<Result<_>>()?;
        self.joint_behaviors.encode(&comps)
    }
}
