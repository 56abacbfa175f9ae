//! A toy sponsored-search model builder.
//!
//! Advertisers are the agents; their behavior is a bid level. Each round a
//! user arrives with a click pattern: pattern `r` clicks the ads ranked
//! `1..=r`. The platform ranks agents by bid (ties broken toward the lower
//! agent index), and feeds back a quantized KPI per agent:
//!
//! - 2 KPI levels: `clicked` / `shown` (clicked iff ranked first and the
//!   pattern clicks rank 1);
//! - 3 KPI levels: `clicked` / `shown` for the rank-1 agent, `lost` for
//!   everyone else.
//!
//! Kernels encode bid-adjustment tendencies: raise after losing, lower
//! after an expensive win (a click costs money), mostly hold after a free
//! impression. All numeric choices live in this module; they are fixtures
//! of this toy, not measurements.

use ndarray::Array2;

use crate::lifted::DEFAULT_STATE_CAP;
use crate::model::{
    AgentKernelSet, BehaviorSpace, FeedbackFunction, FeedbackSpace, McreModel, UserFactorModel,
};
use crate::space::JointSpace;
use crate::{Error, Result};

/// Parameters of the toy sponsored-search model.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSpec {
    /// Number of advertisers.
    pub agents: usize,
    /// Number of bid price levels (behavior labels `bid0 < bid1 < ...`).
    pub bid_levels: usize,
    /// Probability of each click pattern; pattern `r` clicks ranks `1..=r`.
    pub click_pattern_probs: Vec<f64>,
    /// KPI quantization: 2 (`clicked`/`shown`) or 3 (adds `lost`).
    pub kpi_levels: usize,
}

/// Bid-adjustment tendencies `(down, stay, up)` per KPI outcome.
const AFTER_LOST: (f64, f64, f64) = (0.1, 0.3, 0.6);
const AFTER_CLICKED: (f64, f64, f64) = (0.6, 0.3, 0.1);
const AFTER_SHOWN: (f64, f64, f64) = (0.1, 0.8, 0.1);

fn adjustment_row(levels: usize, from: usize, tendency: (f64, f64, f64)) -> Vec<f64> {
    let (down, stay, up) = tendency;
    let mut row = vec![0.0; levels];
    // Out-of-range moves collapse onto the boundary level.
    let lo = from.saturating_sub(1);
    let hi = (from + 1).min(levels - 1);
    row[lo] += down;
    row[from] += stay;
    row[hi] += up;
    row
}

/// Build the model described by `spec`.
pub fn toy_sponsored_search(spec: &ScenarioSpec) -> Result<McreModel> {
    if spec.agents == 0 || spec.bid_levels == 0 {
        return Err(Error::InvalidArgument(
            "scenario needs at least one agent and one bid level".into(),
        ));
    }
    if spec.kpi_levels != 2 && spec.kpi_levels != 3 {
        return Err(Error::InvalidArgument("kpi_levels must be 2 or 3".into()));
    }
    if spec.click_pattern_probs.is_empty() {
        return Err(Error::InvalidArgument("need at least one click pattern".into()));
    }

    let behavior_labels: Vec<String> = (0..spec.bid_levels).map(|i| format!("bid{i}")).collect();
    let feedback_labels: Vec<String> = match spec.kpi_levels {
        2 => vec!["shown".into(), "clicked".into()],
        _ => vec!["lost".into(), "shown".into(), "clicked".into()],
    };
    let factor_labels: Vec<String> =
        (0..spec.click_pattern_probs.len()).map(|r| format!("clicks{r}")).collect();

    let behavior_space = BehaviorSpace::new(behavior_labels)?;
    let feedback_space = FeedbackSpace::new(feedback_labels.clone())?;
    let user_model = UserFactorModel::new(factor_labels, spec.click_pattern_probs.clone())?;

    let joint_behaviors = JointSpace::new(spec.bid_levels, spec.agents)?;
    let joint_feedbacks = JointSpace::new(spec.kpi_levels, spec.agents)?;
    let z = joint_feedbacks
        .count()
        .checked_mul(joint_behaviors.count())
        .and_then(|v| v.checked_mul(joint_behaviors.count()))
        .ok_or_else(|| Error::Dimension("scenario state space overflows".into()))?;
    if z > DEFAULT_STATE_CAP {
        return Err(Error::StateCap { states: z, cap: DEFAULT_STATE_CAP });
    }

    // KPI indices within the feedback label order above.
    let (kpi_lost, kpi_shown, kpi_clicked) = match spec.kpi_levels {
        2 => (usize::MAX, 0, 1),
        _ => (0, 1, 2),
    };

    // Feedback table: rank agents by (bid desc, index asc); the rank-1
    // agent is clicked when the pattern clicks rank 1.
    let mut table = Vec::with_capacity(spec.click_pattern_probs.len());
    for pattern in 0..spec.click_pattern_probs.len() {
        let mut row = Vec::with_capacity(joint_behaviors.count());
        for m in 0..joint_behaviors.count() {
            let bids = joint_behaviors.decode(m);
            let winner = (0..spec.agents)
                .max_by(|&a, &b| bids[a].cmp(&bids[b]).then(b.cmp(&a)))
                .unwrap();
            let mut kpis = Vec::with_capacity(spec.agents);
            for agent in 0..spec.agents {
                let kpi = if agent == winner {
                    if pattern >= 1 {
                        kpi_clicked
                    } else {
                        kpi_shown
                    }
                } else if spec.kpi_levels == 3 {
                    kpi_lost
                } else {
                    kpi_shown
                };
                kpis.push(kpi);
            }
            row.push(joint_feedbacks.encode(&kpis)?);
        }
        table.push(row);
    }
    let feedback_fn =
        FeedbackFunction::new(table, joint_behaviors.count(), joint_feedbacks.count())?;

    // Same adjustment kernels for every agent, indexed by its own KPI.
    let mut per_agent = Vec::with_capacity(spec.kpi_levels);
    for label in &feedback_labels {
        let tendency = match label.as_str() {
            "lost" => AFTER_LOST,
            "clicked" => AFTER_CLICKED,
            _ => AFTER_SHOWN,
        };
        let mut kernel = Array2::zeros((spec.bid_levels, spec.bid_levels));
        for from in 0..spec.bid_levels {
            let row = adjustment_row(spec.bid_levels, from, tendency);
            for (to, p) in row.into_iter().enumerate() {
                kernel[(from, to)] = p;
            }
        }
        per_agent.push(kernel);
    }
    let kernels = vec![per_agent; spec.agents];
    let kernel_set = AgentKernelSet::new(kernels, spec.bid_levels, spec.kpi_levels)?;

    McreModel::new(behavior_space, feedback_space, user_model, feedback_fn, kernel_set)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{check_assumptions, stationary_distribution};
    use crate::lifted::build_lifted_chain;

    #[test]
    fn single_agent_model_passes_assumptions() {
        let spec = ScenarioSpec {
            agents: 1,
            bid_levels: 2,
            click_pattern_probs: vec![0.3, 0.7],
            kpi_levels: 2,
        };
        let model = toy_sponsored_search(&spec).unwrap();
        let report = check_assumptions(&model).unwrap();
        assert!(report.a1_ok, "a1 violations: {:?}", report.a1_violations);
        assert!(report.a2_ok, "a2 violations: {:?}", report.a2_violations);
    }

    #[test]
    fn two_agent_state_count_matches_cardinality() {
        let spec = ScenarioSpec {
            agents: 2,
            bid_levels: 2,
            click_pattern_probs: vec![0.4, 0.6],
            kpi_levels: 3,
        };
        let model = toy_sponsored_search(&spec).unwrap();
        let chain = build_lifted_chain(&model, false).unwrap();
        // Z = |H|^2 * |B|^4
        assert_eq!(chain.len(), 9 * 16);
    }

    #[test]
    fn degenerate_single_level_is_point_orbit() {
        let spec = ScenarioSpec {
            agents: 1,
            bid_levels: 1,
            click_pattern_probs: vec![1.0],
            kpi_levels: 2,
        };
        let model = toy_sponsored_search(&spec).unwrap();
        let chain = build_lifted_chain(&model, false).unwrap();
        let pi = stationary_distribution(chain.matrix(), 1e-12).unwrap();
        // everything concentrates on the single reachable (shown, bid0, bid0)
        let mass_on_max = pi.pi.iter().cloned().fold(0.0, f64::max);
        assert!((mass_on_max - 1.0).abs() < 1e-12);
    }

    #[test]
    fn winner_feedback_follows_click_pattern() {
        let spec = ScenarioSpec {
            agents: 2,
            bid_levels: 2,
            click_pattern_probs: vec![0.5, 0.5],
            kpi_levels: 3,
        };
        let model = toy_sponsored_search(&spec).unwrap();
        let bspace = model.joint_behaviors();
        let fspace = model.joint_feedbacks();
        // agent 1 outbids agent 0: m = (bid0, bid1)
        let m = bspace.encode(&[0, 1]).unwrap();
        // pattern 0: winner shown, loser lost
        let k0 = model.feedback_fn().eval(0, m);
        assert_eq!(fspace.decode(k0), vec![0, 1]); // (lost, shown)
        // pattern 1: winner clicked
        let k1 = model.feedback_fn().eval(1, m);
        assert_eq!(fspace.decode(k1), vec![0, 2]); // (lost, clicked)
        // tie: lower index wins
        let tie = bspace.encode(&[1, 1]).unwrap();
        let kt = model.feedback_fn().eval(1, tie);
        assert_eq!(fspace.decode(kt), vec![2, 0]); // (clicked, lost)
    }
}
