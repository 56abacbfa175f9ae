//! Subcommand implementations.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use serde_json::json;

use mcre_lab::analysis::{
    beta_mixing, check_assumptions, ergodicity_report, stationary_distribution, MixingProfile,
};
use mcre_lab::bounds::{optimal_block_size, pointwise_bound, uniform_bound, MixingParams};
use mcre_lab::learner::{
    covering_number_on_sample, empirical_risk, erm as erm_select, expected_risk, parse_class_str,
    LossFunction, LossKind,
};
use mcre_lab::lifted::{build_lifted_chain, LiftedChain};
use mcre_lab::model::McreModel;
use mcre_lab::model_file::{parse_model_str, ModelFileError};
use mcre_lab::scenario::{toy_sponsored_search, ScenarioSpec};
use mcre_lab::sim::{sample_trajectory, StartMode, TrajectoryConfig};
use mcre_lab::verify::{
    dominance_check, estimate_deviation_tail, estimate_sup_deviation_tail, TailEstimate,
    TailExperimentConfig,
};

use mcre_lab_cli::manifest::RunManifest;
use mcre_lab_cli::output::to_json_string;
use crate::{BoundKindArg, CliError, CliResult, LossArg, ModelSource};

fn read_file(path: &Path) -> CliResult<String> {
    fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(CliError::internal)
}

/// Load the model from exactly one of `--model` / `--scenario`.
fn load_model(source: &ModelSource) -> CliResult<(McreModel, PathBuf)> {
    match (&source.model, &source.scenario) {
        (Some(path), None) => {
            let text = read_file(path)?;
            let model = parse_model_str(&text).map_err(|e| match e {
                ModelFileError::Json(_) => CliError::model(anyhow::Error::new(e)),
                ModelFileError::Invalid(_) => CliError::model(anyhow::Error::new(e)),
            })?;
            Ok((model, path.clone()))
        }
        (None, Some(path)) => {
            let text = read_file(path)?;
            let spec: ScenarioSpec = serde_json::from_str(&text)
                .with_context(|| format!("scenario file {}", path.display()))
                .map_err(CliError::model)?;
            let model = toy_sponsored_search(&spec)?;
            Ok((model, path.clone()))
        }
        _ => Err(CliError::config("exactly one of --model / --scenario is required")),
    }
}

fn ensure_out_dir(out: &Path) -> CliResult<()> {
    fs::create_dir_all(out)
        .with_context(|| format!("creating output directory {}", out.display()))
        .map_err(CliError::internal)
}

fn write_output(out: &Path, name: &str, contents: &str) -> CliResult<()> {
    fs::write(out.join(name), contents)
        .with_context(|| format!("writing {}", out.join(name).display()))
        .map_err(CliError::internal)
}

fn loss_for(model: &McreModel, arg: LossArg) -> LossFunction {
    let kind = match arg {
        LossArg::ZeroOne => LossKind::ZeroOneJoint,
        LossArg::Hamming => LossKind::HammingPerAgent,
    };
    LossFunction::of_kind(kind, model.joint_behaviors())
}

fn loss_name(arg: LossArg) -> &'static str {
    match arg {
        LossArg::ZeroOne => "zero_one",
        LossArg::Hamming => "hamming",
    }
}

// ---------------------------------------------------------------------------
// validate

pub fn validate(model_path: &Path) -> CliResult<()> {
    let text = read_file(model_path)?;
    match parse_model_str(&text) {
        Ok(model) => {
            println!(
                "ok: {} agent(s), {} behaviors, {} feedback values, {} user factors",
                model.agents(),
                model.behavior_space().len(),
                model.feedback_space().len(),
                model.user_model().len()
            );
            Ok(())
        }
        Err(e) => {
            eprint!("{e}");
            Err(CliError { code: 3, error: anyhow::anyhow!("model file is invalid") })
        }
    }
}

// ---------------------------------------------------------------------------
// analyze

pub fn analyze(source: &ModelSource, seed: u64, out: &Path, prune: bool, m_max: usize) -> CliResult<()> {
    let (model, input) = load_model(source)?;
    ensure_out_dir(out)?;

    let chain = build_lifted_chain(&model, prune)?;
    let report = ergodicity_report(chain.matrix())?;
    let assumptions = check_assumptions(&model)?;

    let (pi, betas) = if report.irreducible && report.period == Some(1) {
        let sd = stationary_distribution(chain.matrix(), 1e-12)?;
        let profile = beta_mixing(chain.matrix(), &sd.pi, m_max)?;
        (Some(sd.pi), Some(profile.betas))
    } else {
        (None, None)
    };

    let mut violations = Vec::new();
    for v in &assumptions.a1_violations {
        violations.push(json!({
            "kind": "a1",
            "joint_feedback": v.joint_feedback,
            "irreducible": v.irreducible,
            "period": v.period,
        }));
    }
    for (m, k) in &assumptions.a2_violations {
        violations.push(json!({ "kind": "a2", "joint_behavior": m, "joint_feedback": k }));
    }

    let report_json = json!({
        "irreducible": report.irreducible,
        "period": report.period,
        "n0": report.n0,
        "delta": report.delta,
        "pi": pi,
        "betas": betas,
        "a1": assumptions.a1_ok,
        "a2": assumptions.a2_ok,
        "violations": violations,
    });
    write_output(out, "report.json", &to_json_string(&report_json)?)?;

    let config = json!({
        "seed": seed,
        "prune": prune,
        "m_max": m_max,
        "states": chain.len(),
    });
    let mut manifest = RunManifest::new("analyze", config, &[&input])?;
    manifest.outputs.push("report.json".into());
    manifest.write(out)?;
    println!(
        "analyze: Z = {}, irreducible = {}, period = {:?}, n0 = {:?}",
        chain.len(),
        report.irreducible,
        report.period,
        report.n0
    );
    Ok(())
}

// ---------------------------------------------------------------------------
// simulate

fn parse_start(model: &McreModel, start: &str, burn_in: usize) -> CliResult<StartMode> {
    if start == "stationary" {
        return Ok(StartMode::Stationary);
    }
    if let Some(label) = start.strip_prefix("fixed:") {
        let joint_behavior = model.behavior_index(label)?;
        return Ok(StartMode::Fixed { joint_behavior, burn_in });
    }
    Err(CliError::config(format!(
        "start must be \"stationary\" or \"fixed:<joint behavior label>\", got {start:?}"
    )))
}

/// Build the pruned chain and stationary distribution, failing with the
/// ergodicity evidence when the chain cannot support stationary starts.
fn ergodic_chain(model: &McreModel) -> CliResult<(LiftedChain, Vec<f64>)> {
    let chain = build_lifted_chain(model, true)?;
    let report = ergodicity_report(chain.matrix())?;
    if !report.irreducible || report.period != Some(1) {
        return Err(mcre_lab::Error::NotErgodic(format!(
            "pruned lifted chain: irreducible = {}, period = {:?}",
            report.irreducible, report.period
        ))
        .into());
    }
    let pi = stationary_distribution(chain.matrix(), 1e-12)?.pi;
    Ok((chain, pi))
}

pub fn simulate(
    source: &ModelSource,
    rounds: usize,
    seed: u64,
    start: &str,
    burn_in: usize,
    record_users: bool,
    out: &Path,
) -> CliResult<()> {
    let (model, input) = load_model(source)?;
    ensure_out_dir(out)?;
    let start_mode = parse_start(&model, start, burn_in)?;

    let traj = match &start_mode {
        StartMode::Stationary => {
            let (chain, pi) = ergodic_chain(&model)?;
            let cfg = TrajectoryConfig { rounds, seed, stream: 0, start: start_mode.clone(), record_users };
            sample_trajectory(&model, &cfg, Some((&chain, &pi)))?
        }
        StartMode::Fixed { .. } => {
            let cfg = TrajectoryConfig { rounds, seed, stream: 0, start: start_mode.clone(), record_users };
            sample_trajectory(&model, &cfg, None)?
        }
    };

    let mut writer = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["t", "h", "b", "b_next"];
    if record_users {
        header.push("u");
    }
    writer.write_record(&header).map_err(|e| CliError::internal(e.into()))?;
    for (t, z) in traj.states.iter().enumerate() {
        let mut record = vec![
            (t + 1).to_string(),
            model.feedback_label(z.feedback),
            model.behavior_label(z.behavior),
            model.behavior_label(z.next_behavior),
        ];
        if record_users {
            let user = traj
                .users
                .as_ref()
                .and_then(|us| us[t])
                .map(|u| model.user_model().factors()[u].clone())
                .unwrap_or_default();
            record.push(user);
        }
        writer.write_record(&record).map_err(|e| CliError::internal(e.into()))?;
    }
    let csv_bytes = writer.into_inner().map_err(|e| CliError::internal(e.into()))?;
    write_output(out, "trajectory.csv", std::str::from_utf8(&csv_bytes).unwrap())?;

    let config = json!({
        "rounds": rounds,
        "seed": seed,
        "start": start,
        "burn_in": burn_in,
        "record_users": record_users,
    });
    let mut manifest = RunManifest::new("simulate", config, &[&input])?;
    manifest.outputs.push("trajectory.csv".into());
    manifest.write(out)?;
    println!("simulate: wrote {} rounds", traj.len());
    Ok(())
}

// ---------------------------------------------------------------------------
// erm

pub fn erm(
    source: &ModelSource,
    class_path: &Path,
    rounds: usize,
    seed: u64,
    loss_arg: LossArg,
    out: &Path,
) -> CliResult<()> {
    let (model, input) = load_model(source)?;
    ensure_out_dir(out)?;
    let class_text = read_file(class_path)?;
    let class = parse_class_str(&class_text, &model).map_err(|e| CliError::model(e.into()))?;
    let loss = loss_for(&model, loss_arg);

    let (chain, pi) = ergodic_chain(&model)?;
    let cfg = TrajectoryConfig {
        rounds,
        seed,
        stream: 0,
        start: StartMode::Stationary,
        record_users: false,
    };
    let traj = sample_trajectory(&model, &cfg, Some((&chain, &pi)))?;

    let (selected, selected_risk) = erm_select(&class, &traj, &loss)?;
    let members: Vec<serde_json::Value> = class
        .members()
        .iter()
        .enumerate()
        .map(|(index, f)| {
            let empirical = empirical_risk(f, &traj, &loss)?;
            let expected = expected_risk(f, &chain, &pi, &loss)?;
            Ok(json!({
                "index": index,
                "empirical": empirical,
                "expected": expected,
                "gap": (empirical - expected).abs(),
            }))
        })
        .collect::<mcre_lab::Result<_>>()?;

    let report = json!({
        "loss": loss_name(loss_arg),
        "rounds": rounds,
        "seed": seed,
        "selected": selected,
        "selected_empirical": selected_risk,
        "members": members,
    });
    write_output(out, "erm.json", &to_json_string(&report)?)?;

    let config = json!({
        "rounds": rounds,
        "seed": seed,
        "loss": loss_name(loss_arg),
        "class_members": class.len(),
    });
    let mut manifest = RunManifest::new("erm", config, &[&input, class_path])?;
    manifest.outputs.push("erm.json".into());
    manifest.write(out)?;
    println!("erm: selected member {selected} with empirical risk {selected_risk}");
    Ok(())
}

// ---------------------------------------------------------------------------
// bound

/// Flag-level bound parameters; flags override the parameter file.
#[derive(Debug, Default, Clone, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundFlags {
    pub b: Option<f64>,
    pub n0: Option<usize>,
    pub delta: Option<f64>,
    pub z: Option<usize>,
    pub rounds: Option<usize>,
    pub eps: Option<f64>,
    pub cover: Option<usize>,
    pub tau: Option<usize>,
    pub beta: Option<f64>,
    pub beta0: Option<f64>,
    pub gamma: Option<f64>,
    pub s: Option<f64>,
    pub c: Option<f64>,
}

impl BoundFlags {
    fn merged_over(&self, file: BoundFlags) -> BoundFlags {
        BoundFlags {
            b: self.b.or(file.b),
            n0: self.n0.or(file.n0),
            delta: self.delta.or(file.delta),
            z: self.z.or(file.z),
            rounds: self.rounds.or(file.rounds),
            eps: self.eps.or(file.eps),
            cover: self.cover.or(file.cover),
            tau: self.tau.or(file.tau),
            beta: self.beta.or(file.beta),
            beta0: self.beta0.or(file.beta0),
            gamma: self.gamma.or(file.gamma),
            s: self.s.or(file.s),
            c: self.c.or(file.c),
        }
    }
}

fn need<T: Copy>(v: Option<T>, name: &str) -> CliResult<T> {
    v.ok_or_else(|| CliError::config(format!("missing parameter --{name}")))
}

pub fn bound(
    kind: BoundKindArg,
    params_path: Option<&Path>,
    flags: &BoundFlags,
    out: Option<&Path>,
) -> CliResult<()> {
    let from_file = match params_path {
        Some(path) => {
            let text = read_file(path)?;
            serde_json::from_str(&text)
                .with_context(|| format!("parameter file {}", path.display()))
                .map_err(|e| CliError::config(format!("{e:#}")))?
        }
        None => BoundFlags::default(),
    };
    let p = flags.merged_over(from_file);

    let (value, inputs) = match kind {
        BoundKindArg::Pointwise => {
            let b = need(p.b, "b")?;
            let n0 = need(p.n0, "n0")?;
            let delta = need(p.delta, "delta")?;
            let z = need(p.z, "z")?;
            let rounds = need(p.rounds, "rounds")?;
            let eps = need(p.eps, "eps")?;
            let value = pointwise_bound(b, n0, delta, z, rounds, eps)?;
            (value, json!({"b": b, "n0": n0, "delta": delta, "z": z, "rounds": rounds, "eps": eps}))
        }
        BoundKindArg::Uniform => {
            let cover = need(p.cover, "cover")?;
            let tau = need(p.tau, "tau")?;
            let b = need(p.b, "b")?;
            let eps = need(p.eps, "eps")?;
            let beta = need(p.beta, "beta")?;
            let value = uniform_bound(cover, tau, b, eps, beta);
            (value, json!({"cover": cover, "tau": tau, "b": b, "eps": eps, "beta": beta}))
        }
        BoundKindArg::Corollary => {
            let mix = MixingParams {
                beta0: need(p.beta0, "beta0")?,
                gamma: need(p.gamma, "gamma")?,
                s: need(p.s, "s")?,
                c: need(p.c, "c")?,
            };
            let cover = need(p.cover, "cover")?;
            let b = need(p.b, "b")?;
            let eps = need(p.eps, "eps")?;
            let rounds = need(p.rounds, "rounds")?;
            let (scheme, corollary) = optimal_block_size(&mix, rounds)?;
            let value = corollary.eval(cover, b, eps, rounds);
            (
                value,
                json!({
                    "beta0": mix.beta0, "gamma": mix.gamma, "s": mix.s, "c": mix.c,
                    "cover": cover, "b": b, "eps": eps, "rounds": rounds,
                    "block_m": scheme.block_m, "tau": scheme.tau, "discarded": scheme.discarded,
                }),
            )
        }
    };

    let kind_name = match kind {
        BoundKindArg::Pointwise => "pointwise",
        BoundKindArg::Uniform => "uniform",
        BoundKindArg::Corollary => "corollary",
    };
    let report = json!({
        "kind": kind_name,
        "value": value,
        "vacuous": value >= 1.0,
        "inputs": inputs,
    });
    let text = to_json_string(&report)?;
    print!("{text}");
    if let Some(dir) = out {
        ensure_out_dir(dir)?;
        write_output(dir, "bound.json", &text)?;
        let mut manifest = RunManifest::new(
            "bound",
            json!({"kind": kind_name, "inputs": report["inputs"]}),
            &[],
        )?;
        manifest.outputs.push("bound.json".into());
        manifest.write(dir)?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// verify

/// Divisor block lengths `m` with `2 m tau = rounds` exactly.
fn exact_block_lengths(rounds: usize, m_cap: usize) -> Vec<usize> {
    (1..=m_cap.min(rounds / 2)).filter(|m| rounds.is_multiple_of(2 * m)).collect()
}

/// Best uniform bound over admissible block lengths for one cell.
fn best_uniform_bound(
    profile: &MixingProfile,
    cover: usize,
    loss_bound: f64,
    eps: f64,
    rounds: usize,
) -> f64 {
    let mut best = f64::INFINITY;
    for m in exact_block_lengths(rounds, profile.max_lag()) {
        let tau = rounds / (2 * m);
        let value = uniform_bound(cover, tau, loss_bound, eps, profile.beta(m));
        if value < best {
            best = value;
        }
    }
    best
}

#[allow(clippy::too_many_arguments)]
pub fn verify(
    source: &ModelSource,
    class_path: Option<&Path>,
    hypothesis_path: Option<&Path>,
    replicas: usize,
    t_grid: &[usize],
    eps_grid: &[f64],
    seed: u64,
    loss_arg: LossArg,
    out: &Path,
) -> CliResult<()> {
    let (model, input) = load_model(source)?;
    ensure_out_dir(out)?;
    let loss = loss_for(&model, loss_arg);
    let cfg = TailExperimentConfig {
        replicas,
        t_grid: t_grid.to_vec(),
        eps_grid: eps_grid.to_vec(),
        master_seed: seed,
        confidence: 0.99,
    };

    // Stream id for the reference trajectory used by covering numbers,
    // disjoint from replica streams 0..replicas.
    const REF_STREAM: u64 = u64::MAX;

    let (est, bounds, mode, extra, class_input): (TailEstimate, Vec<f64>, &str, serde_json::Value, PathBuf) =
        match (class_path, hypothesis_path) {
            (Some(path), None) => {
                let class_text = read_file(path)?;
                let class =
                    parse_class_str(&class_text, &model).map_err(|e| CliError::model(e.into()))?;
                let (chain, pi) = ergodic_chain(&model)?;
                let m_max = t_grid.iter().max().copied().unwrap_or(2).clamp(1, 200);
                let profile = beta_mixing(chain.matrix(), &pi, m_max)?;

                // Sample-based covering numbers on a dedicated reference
                // trajectory per grid round count.
                let mut covers = Vec::new();
                for &rounds in t_grid {
                    let ref_cfg = TrajectoryConfig {
                        rounds,
                        seed,
                        stream: REF_STREAM,
                        start: StartMode::Stationary,
                        record_users: false,
                    };
                    let ref_traj = sample_trajectory(&model, &ref_cfg, Some((&chain, &pi)))?;
                    let per_eps: Vec<usize> = eps_grid
                        .iter()
                        .map(|&eps| {
                            covering_number_on_sample(&class, &loss, &ref_traj, eps / 16.0)
                                .map(|c| c.value)
                        })
                        .collect::<mcre_lab::Result<_>>()?;
                    covers.push(per_eps);
                }

                let mut bounds = Vec::new();
                for (ti, &rounds) in t_grid.iter().enumerate() {
                    for (ei, &eps) in eps_grid.iter().enumerate() {
                        bounds.push(best_uniform_bound(
                            &profile,
                            covers[ti][ei],
                            loss.bound(),
                            eps,
                            rounds,
                        ));
                    }
                }
                let est = estimate_sup_deviation_tail(&model, &class, &loss, &cfg)?;
                let extra = json!({
                    "members": class.len(),
                    "covers": covers,
                    "beta_m_max": m_max,
                });
                (est, bounds, "uniform", extra, path.to_path_buf())
            }
            (None, Some(path)) => {
                let class_text = read_file(path)?;
                let class =
                    parse_class_str(&class_text, &model).map_err(|e| CliError::model(e.into()))?;
                if class.len() != 1 {
                    return Err(CliError::config(format!(
                        "--hypothesis file must contain exactly one hypothesis, found {}",
                        class.len()
                    )));
                }
                let f = class.member(0).clone();
                let chain = build_lifted_chain(&model, true)?;
                let report = ergodicity_report(chain.matrix())?;
                let (n0, delta) = match (report.n0, report.delta) {
                    (Some(n0), Some(delta)) => (n0, delta),
                    _ => {
                        return Err(mcre_lab::Error::Precondition(
                            "lifted chain is not primitive; pointwise bound undefined".into(),
                        )
                        .into())
                    }
                };
                let z = chain.len();
                let mut bounds = Vec::new();
                for &rounds in t_grid {
                    for &eps in eps_grid {
                        // Cells below the admissibility threshold carry an
                        // infinite bound and are reported vacuous.
                        let value = pointwise_bound(loss.bound(), n0, delta, z, rounds, eps)
                            .unwrap_or(f64::INFINITY);
                        bounds.push(value);
                    }
                }
                let est = estimate_deviation_tail(&model, &f, &loss, &cfg)?;
                let extra = json!({ "n0": n0, "delta": delta, "z": z });
                (est, bounds, "pointwise", extra, path.to_path_buf())
            }
            _ => {
                return Err(CliError::config(
                    "exactly one of --class / --hypothesis is required",
                ))
            }
        };

    let report = dominance_check(&est, &bounds)?;

    // tails.csv
    let mut tails = csv::Writer::from_writer(Vec::new());
    tails
        .write_record(["t", "eps", "hits", "freq", "cp_upper"])
        .map_err(|e| CliError::internal(e.into()))?;
    for cell in &est.cells {
        tails
            .write_record(&[
                cell.rounds.to_string(),
                cell.eps.to_string(),
                cell.hits.to_string(),
                cell.frequency.to_string(),
                cell.cp_upper.to_string(),
            ])
            .map_err(|e| CliError::internal(e.into()))?;
    }
    let bytes = tails.into_inner().map_err(|e| CliError::internal(e.into()))?;
    write_output(out, "tails.csv", std::str::from_utf8(&bytes).unwrap())?;

    // dominance.csv
    let mut dom = csv::Writer::from_writer(Vec::new());
    dom.write_record(["t", "eps", "hits", "freq", "cp_upper", "bound", "vacuous", "verdict"])
        .map_err(|e| CliError::internal(e.into()))?;
    for cell in &report.cells {
        dom.write_record(&[
            cell.rounds.to_string(),
            cell.eps.to_string(),
            cell.hits.to_string(),
            cell.frequency.to_string(),
            cell.cp_upper.to_string(),
            cell.bound.to_string(),
            (cell.verdict == mcre_lab::verify::CellVerdict::Vacuous).to_string(),
            cell.verdict.to_string(),
        ])
        .map_err(|e| CliError::internal(e.into()))?;
    }
    let bytes = dom.into_inner().map_err(|e| CliError::internal(e.into()))?;
    write_output(out, "dominance.csv", std::str::from_utf8(&bytes).unwrap())?;

    // plot.csv: bound vs empirical per T
    let mut plot = csv::Writer::from_writer(Vec::new());
    plot.write_record(["t", "eps", "empirical_freq", "cp_upper", "bound"])
        .map_err(|e| CliError::internal(e.into()))?;
    for cell in &report.cells {
        plot.write_record(&[
            cell.rounds.to_string(),
            cell.eps.to_string(),
            cell.frequency.to_string(),
            cell.cp_upper.to_string(),
            cell.bound.to_string(),
        ])
        .map_err(|e| CliError::internal(e.into()))?;
    }
    let bytes = plot.into_inner().map_err(|e| CliError::internal(e.into()))?;
    write_output(out, "plot.csv", std::str::from_utf8(&bytes).unwrap())?;

    // report.json
    use mcre_lab::verify::CellVerdict;
    let summary = json!({
        "mode": mode,
        "loss": loss_name(loss_arg),
        "replicas": replicas,
        "confidence": est.confidence,
        "seed": seed,
        "t_grid": t_grid,
        "eps_grid": eps_grid,
        "detail": extra,
        "counts": {
            "pass": report.count(CellVerdict::Pass),
            "fail": report.count(CellVerdict::Fail),
            "inconclusive": report.count(CellVerdict::Inconclusive),
            "vacuous": report.count(CellVerdict::Vacuous),
        },
        "no_failures": report.no_failures(),
        "cells": report.cells,
    });
    write_output(out, "report.json", &to_json_string(&summary)?)?;

    let config = json!({
        "mode": mode,
        "replicas": replicas,
        "t_grid": t_grid,
        "eps_grid": eps_grid,
        "seed": seed,
        "loss": loss_name(loss_arg),
    });
    let mut manifest = RunManifest::new("verify", config, &[&input, &class_input])?;
    manifest.outputs.extend(
        ["tails.csv", "dominance.csv", "plot.csv", "report.json"].map(String::from),
    );
    manifest.write(out)?;
    println!(
        "verify ({mode}): pass {}, fail {}, inconclusive {}, vacuous {}",
        report.count(CellVerdict::Pass),
        report.count(CellVerdict::Fail),
        report.count(CellVerdict::Inconclusive),
        report.count(CellVerdict::Vacuous),
    );
    Ok(())
}
