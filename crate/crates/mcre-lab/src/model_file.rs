//! JSON model file schema.
//!
//! ```json
//! {
//!   "agents": 2,
//!   "behavior_labels": ["low", "high"],
//!   "feedback_labels": ["good", "bad"],
//!   "user_factors": { "labels": ["u0", "u1"], "probs": [0.3, 0.7] },
//!   "feedback_table": { "u0|low,low": "good,bad", ... },
//!   "kernels": [ { "good": [[0.9, 0.1], [0.2, 0.8]], "bad": [[...], [...]] }, ... ]
//! }
//! ```
//!
//! `feedback_table` maps `"<factor>|<b1>,...,<bN>"` keys to
//! `"<h1>,...,<hN>"` values and must be total. `kernels` has one entry per
//! agent mapping each feedback label to a row-major `|B| x |B|` matrix.
//! Unknown keys anywhere are rejected. Validation failures are collected
//! as located diagnostics rather than stopping at the first problem.

use std::collections::BTreeMap;

use ndarray::Array2;
use serde::Deserialize;

use crate::model::{
    AgentKernelSet, BehaviorSpace, FeedbackFunction, FeedbackSpace, McreModel, UserFactorModel,
};
use crate::space::JointSpace;

/// A single located validation problem.
#[derive(Debug, Clone, serde::Serialize)]
pub struct Diagnostic {
    pub location: String,
    pub message: String,
}

/// Why a model file failed to load.
#[derive(Debug)]
pub enum ModelFileError {
    /// Malformed JSON or schema mismatch (unknown keys, wrong types).
    Json(serde_json::Error),
    /// Parsed but violates model invariants.
    Invalid(Vec<Diagnostic>),
}

impl std::fmt::Display for ModelFileError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ModelFileError::Json(e) => write!(f, "model file: {e}"),
            ModelFileError::Invalid(diags) => {
                writeln!(f, "model file: {} validation problem(s):", diags.len())?;
                for d in diags {
                    writeln!(f, "  {}: {}", d.location, d.message)?;
                }
                Ok(())
            }
        }
    }
}

impl std::error::Error for ModelFileError {}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModelFile {
    agents: usize,
    behavior_labels: Vec<String>,
    feedback_labels: Vec<String>,
    user_factors: RawUserFactors,
    feedback_table: BTreeMap<String, String>,
    kernels: Vec<BTreeMap<String, Vec<Vec<f64>>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawUserFactors {
    labels: Vec<String>,
    probs: Vec<f64>,
}

/// Parse and validate a model file.
pub fn parse_model_str(text: &str) -> Result<McreModel, ModelFileError> {
    let raw: RawModelFile = serde_json::from_str(text).map_err(ModelFileError::Json)?;
    let mut diags = Vec::new();

    if raw.agents == 0 {
        diags.push(Diagnostic { location: "agents".into(), message: "must be >= 1".into() });
    }

    let behavior_space = BehaviorSpace::new(raw.behavior_labels.clone()).map_err(|e| diags_err(&mut diags, "behavior_labels", e));
    let feedback_space = FeedbackSpace::new(raw.feedback_labels.clone()).map_err(|e| diags_err(&mut diags, "feedback_labels", e));
    let user_model = UserFactorModel::new(raw.user_factors.labels.clone(), raw.user_factors.probs.clone())
        .map_err(|e| diags_err(&mut diags, "user_factors", e));

    let (behavior_space, feedback_space, user_model) = match (behavior_space, feedback_space, user_model) {
        (Ok(b), Ok(h), Ok(u)) if diags.is_empty() => (b, h, u),
        _ => return Err(ModelFileError::Invalid(diags)),
    };

    let n = raw.agents;
    let joint_b = match JointSpace::new(behavior_space.len(), n) {
        Ok(s) => s,
        Err(e) => {
            diags.push(Diagnostic { location: "agents".into(), message: e.to_string() });
            return Err(ModelFileError::Invalid(diags));
        }
    };
    let joint_h = JointSpace::new(feedback_space.len(), n).expect("same arity as joint_b");

    // feedback_table: parse every key, detect unknown and missing entries.
    let mut table = vec![vec![usize::MAX; joint_b.count()]; user_model.len()];
    for (key, value) in &raw.feedback_table {
        let loc = format!("feedback_table[{key:?}]");
        let Some((factor_part, behavior_part)) = key.split_once('|') else {
            diags.push(Diagnostic { location: loc, message: "key must look like \"factor|b1,...,bN\"".into() });
            continue;
        };
        let Some(u_idx) = user_model.index_of(factor_part) else {
            diags.push(Diagnostic { location: loc, message: format!("unknown user factor {factor_part:?}") });
            continue;
        };
        let b_idx = match parse_joint(behavior_part, n, |l| behavior_space.index_of(l), &joint_b) {
            Ok(i) => i,
            Err(msg) => {
                diags.push(Diagnostic { location: loc, message: msg });
                continue;
            }
        };
        let h_idx = match parse_joint(value, n, |l| feedback_space.index_of(l), &joint_h) {
            Ok(i) => i,
            Err(msg) => {
                diags.push(Diagnostic { location: loc, message: msg });
                continue;
            }
        };
        if table[u_idx][b_idx] != usize::MAX {
            diags.push(Diagnostic { location: loc, message: "duplicate entry".into() });
        }
        table[u_idx][b_idx] = h_idx;
    }
    for (u_idx, row) in table.iter().enumerate() {
        for (b_idx, &v) in row.iter().enumerate() {
            if v == usize::MAX {
                let key = format!(
                    "{}|{}",
                    user_model.factors()[u_idx],
                    joint_label(&joint_b, b_idx, behavior_space.labels())
                );
                diags.push(Diagnostic {
                    location: "feedback_table".into(),
                    message: format!("missing entry for key {key:?}"),
                });
            }
        }
    }

    // kernels: one map per agent, one matrix per feedback label.
    if raw.kernels.len() != n {
        diags.push(Diagnostic {
            location: "kernels".into(),
            message: format!("{} agent entries, expected {n}", raw.kernels.len()),
        });
    }
    let nb = behavior_space.len();
    let mut kernels: Vec<Vec<Array2<f64>>> = Vec::new();
    for (agent, per_feedback) in raw.kernels.iter().enumerate() {
        let mut agent_kernels = Vec::with_capacity(feedback_space.len());
        for label in feedback_space.labels() {
            let loc = format!("kernels[{agent}].{label}");
            let Some(rows) = per_feedback.get(label) else {
                diags.push(Diagnostic { location: loc, message: "missing kernel for this feedback label".into() });
                agent_kernels.push(Array2::zeros((0, 0)));
                continue;
            };
            match kernel_from_rows(rows, nb, &loc, &mut diags) {
                Some(k) => agent_kernels.push(k),
                None => agent_kernels.push(Array2::zeros((0, 0))),
            }
        }
        for label in per_feedback.keys() {
            if feedback_space.index_of(label).is_none() {
                diags.push(Diagnostic {
                    location: format!("kernels[{agent}]"),
                    message: format!("unknown feedback label {label:?}"),
                });
            }
        }
        kernels.push(agent_kernels);
    }

    if !diags.is_empty() {
        return Err(ModelFileError::Invalid(diags));
    }

    let feedback_fn = match FeedbackFunction::new(table, joint_b.count(), joint_h.count()) {
        Ok(f) => f,
        Err(e) => {
            diags.push(Diagnostic { location: "feedback_table".into(), message: e.to_string() });
            return Err(ModelFileError::Invalid(diags));
        }
    };
    let kernel_set = match AgentKernelSet::new(kernels, nb, feedback_space.len()) {
        Ok(k) => k,
        Err(e) => {
            diags.push(Diagnostic { location: "kernels".into(), message: e.to_string() });
            return Err(ModelFileError::Invalid(diags));
        }
    };
    McreModel::new(behavior_space, feedback_space, user_model, feedback_fn, kernel_set).map_err(|e| {
        ModelFileError::Invalid(vec![Diagnostic { location: "model".into(), message: e.to_string() }])
    })
}

fn diags_err(diags: &mut Vec<Diagnostic>, location: &str, e: crate::Error) {
    diags.push(Diagnostic { location: location.into(), message: e.to_string() });
}

fn parse_joint(
    text: &str,
    arity: usize,
    index_of: impl Fn(&str) -> Option<usize>,
    space: &JointSpace,
) -> Result<usize, String> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != arity {
        return Err(format!("{text:?} has {} components, expected {arity}", parts.len()));
    }
    let mut comps = Vec::with_capacity(arity);
    for part in parts {
        match index_of(part) {
            Some(i) => comps.push(i),
            None => return Err(format!("unknown label {part:?}")),
        }
    }
    space.encode(&comps).map_err(|e| e.to_string())
}

fn joint_label(space: &JointSpace, idx: usize, labels: &[String]) -> String {
    space
        .decode(idx)
        .iter()
        .map(|&c| labels[c].as_str())
        .collect::<Vec<_>>()
        .join(",")
}

fn kernel_from_rows(
    rows: &[Vec<f64>],
    nb: usize,
    loc: &str,
    diags: &mut Vec<Diagnostic>,
) -> Option<Array2<f64>> {
    if rows.len() != nb {
        diags.push(Diagnostic {
            location: loc.into(),
            message: format!("{} rows, expected {nb}", rows.len()),
        });
        return None;
    }
    let mut k = Array2::zeros((nb, nb));
    let mut ok = true;
    for (i, row) in rows.iter().enumerate() {
        if row.len() != nb {
            diags.push(Diagnostic {
                location: format!("{loc}.row[{i}]"),
                message: format!("{} columns, expected {nb}", row.len()),
            });
            ok = false;
            continue;
        }
        let sum: f64 = row.iter().sum();
        if row.iter().any(|&v| !v.is_finite() || v < 0.0) {
            diags.push(Diagnostic {
                location: format!("{loc}.row[{i}]"),
                message: "entries must be finite and >= 0".into(),
            });
            ok = false;
        } else if (sum - 1.0).abs() > crate::stochastic::INPUT_TOL {
            diags.push(Diagnostic {
                location: format!("{loc}.row[{i}]"),
                message: format!("row sums to {sum}, expected 1"),
            });
            ok = false;
        }
        for (j, &v) in row.iter().enumerate().take(nb.min(row.len())) {
            k[(i, j)] = v;
        }
    }
    ok.then_some(k)
}

/// Serialize a model back into the file schema (used to persist scenario
/// builds).
pub fn model_to_json(model: &McreModel) -> serde_json::Value {
    let n = model.agents();
    let joint_b = model.joint_behaviors();
    let mut feedback_table = BTreeMap::new();
    for (u_idx, factor) in model.user_model().factors().iter().enumerate() {
        for m in 0..joint_b.count() {
            let key = format!("{factor}|{}", model.behavior_label(m));
            let value = model.feedback_label(model.feedback_fn().eval(u_idx, m));
            feedback_table.insert(key, value);
        }
    }
    let kernels: Vec<BTreeMap<String, Vec<Vec<f64>>>> = (0..n)
        .map(|agent| {
            model
                .feedback_space()
                .labels()
                .iter()
                .enumerate()
                .map(|(k, label)| {
                    let kernel = model.kernel_set().kernel(agent, k);
                    let rows: Vec<Vec<f64>> =
                        kernel.rows().into_iter().map(|r| r.to_vec()).collect();
                    (label.clone(), rows)
                })
                .collect()
        })
        .collect();
    serde_json::json!({
        "agents": n,
        "behavior_labels": model.behavior_space().labels(),
        "feedback_labels": model.feedback_space().labels(),
        "user_factors": {
            "labels": model.user_model().factors(),
            "probs": model.user_model().probs(),
        },
        "feedback_table": feedback_table,
        "kernels": kernels,
    })
}
