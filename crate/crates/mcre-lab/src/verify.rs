//! Monte Carlo deviation-tail estimation and dominance checks.
//!
//! A tail experiment runs `R` independent stationary-start replicas per
//! round-count in a grid, measures how often the empirical risk deviates
//! from the exact expected risk by at least each `eps` in a grid, and wraps
//! each frequency in an exact binomial (Clopper-Pearson) upper confidence
//! limit. Dominance then compares those limits cell-by-cell against
//! theorem bound values, distinguishing four outcomes:
//!
//! - `vacuous`: the clamped bound is >= 1 and says nothing;
//! - `pass`: the confidence limit is at or below the bound;
//! - `inconclusive`: the bound sits below what `R` replicas can resolve
//!   (frequency does not exceed it, but the confidence limit does);
//! - `fail`: the measured frequency itself exceeds the bound.
//!
//! Replica `r` depends only on `(master_seed, r)`: replicas use disjoint
//! counter-based streams, so permuting or parallelizing them cannot change
//! any aggregate.

use rayon::prelude::*;
use statrs::distribution::{Beta, ContinuousCDF};

use crate::analysis::stationary_distribution;
use crate::learner::{expected_risk, Hypothesis, HypothesisClass, LossFunction};
use crate::lifted::{build_lifted_chain, LiftedChain};
use crate::model::McreModel;
use crate::sim::{sample_trajectory, StartMode, Trajectory, TrajectoryConfig};
use crate::stochastic::tv_distance_slice;
use crate::{Error, Result};

/// Experiment design for tail estimation.
#[derive(Debug, Clone, serde::Serialize)]
pub struct TailExperimentConfig {
    pub replicas: usize,
    pub t_grid: Vec<usize>,
    pub eps_grid: Vec<f64>,
    pub master_seed: u64,
    /// Two-sided confidence level of the per-cell binomial interval.
    pub confidence: f64,
}

impl TailExperimentConfig {
    /// Default design: 2000 replicas, `T` in {100, 1000, 10000},
    /// `eps` in {0.05, 0.1, 0.2, 0.3}, 99% confidence.
    pub fn default_grid(master_seed: u64) -> Self {
        TailExperimentConfig {
            replicas: 2000,
            t_grid: vec![100, 1000, 10_000],
            eps_grid: vec![0.05, 0.1, 0.2, 0.3],
            master_seed,
            confidence: 0.99,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.replicas == 0 {
            return Err(Error::InvalidArgument("need at least one replica".into()));
        }
        if self.t_grid.is_empty() || self.eps_grid.is_empty() {
            return Err(Error::InvalidArgument("grids must be non-empty".into()));
        }
        if self.t_grid.contains(&0) || self.eps_grid.iter().any(|&e| e <= 0.0) {
            return Err(Error::InvalidArgument("grids must be positive".into()));
        }
        if !(0.0 < self.confidence && self.confidence < 1.0) {
            return Err(Error::InvalidArgument("confidence must be in (0,1)".into()));
        }
        Ok(())
    }
}

/// One `(T, eps)` cell of a tail estimate.
#[derive(Debug, Clone, serde::Serialize)]
pub struct TailCell {
    pub rounds: usize,
    pub eps: f64,
    pub hits: usize,
    pub frequency: f64,
    pub cp_upper: f64,
}

/// Measured deviation tails over the full grid, row-major in
/// `(t_grid, eps_grid)` order.
#[derive(Debug, Clone, serde::Serialize)]
pub struct TailEstimate {
    pub cells: Vec<TailCell>,
    pub replicas: usize,
    pub confidence: f64,
}

/// Exact binomial upper confidence limit for `hits` of `n` at two-sided
/// level `confidence` (upper tail mass `(1-confidence)/2`): the
/// `1 - alpha/2` quantile of `Beta(hits + 1, n - hits)`, found by
/// bisection on the regularized incomplete beta.
pub fn clopper_pearson_upper(hits: usize, n: usize, confidence: f64) -> f64 {
    assert!(hits <= n && n > 0);
    let alpha = 1.0 - confidence;
    if hits == n {
        return 1.0;
    }
    let beta = Beta::new((hits + 1) as f64, (n - hits) as f64).unwrap();
    let target = 1.0 - alpha / 2.0;
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if beta.cdf(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON * hi {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// The ergodic context shared by the estimators: pruned chain, stationary
/// distribution, and expected risks.
struct ErgodicContext {
    chain: LiftedChain,
    pi: Vec<f64>,
}

fn ergodic_context(model: &McreModel) -> Result<ErgodicContext> {
    let chain = build_lifted_chain(model, true)?;
    let report = crate::analysis::ergodicity_report(chain.matrix())?;
    if !report.irreducible || report.period != Some(1) {
        return Err(Error::NotErgodic(format!(
            "pruned lifted chain: irreducible = {}, period = {:?}",
            report.irreducible, report.period
        )));
    }
    let pi = stationary_distribution(chain.matrix(), 1e-12)?.pi;
    Ok(ErgodicContext { chain, pi })
}

/// Per-replica deviations at every grid round-count, for every member.
///
/// One trajectory pass per replica: running loss sums are snapshotted at
/// each grid point, so a replica's result is a pure function of
/// `(master_seed, replica)`.
fn replica_deviations(
    model: &McreModel,
    ctx: &ErgodicContext,
    members: &[&Hypothesis],
    expected: &[f64],
    loss: &LossFunction,
    cfg: &TailExperimentConfig,
    replica: usize,
) -> Vec<Vec<f64>> {
    let max_t = *cfg.t_grid.iter().max().unwrap();
    let traj_cfg = TrajectoryConfig {
        rounds: max_t,
        seed: cfg.master_seed,
        stream: replica as u64,
        start: StartMode::Stationary,
        record_users: false,
    };
    let traj = sample_trajectory(model, &traj_cfg, Some((&ctx.chain, &ctx.pi)))
        .expect("replica trajectory generation cannot fail after context checks");

    let mut sums = vec![0.0f64; members.len()];
    let mut out = vec![Vec::with_capacity(members.len()); cfg.t_grid.len()];
    let mut grid: Vec<(usize, usize)> = cfg.t_grid.iter().copied().enumerate().collect();
    grid.sort_by_key(|&(_, t)| t);
    let mut next = 0;
    for (t, z) in traj.states.iter().enumerate() {
        for (f_idx, f) in members.iter().enumerate() {
            sums[f_idx] += loss.eval(f, z);
        }
        let completed = t + 1;
        while next < grid.len() && grid[next].1 == completed {
            let (slot, rounds) = grid[next];
            out[slot] = sums
                .iter()
                .zip(expected.iter())
                .map(|(&s, &e)| (s / rounds as f64 - e).abs())
                .collect();
            next += 1;
        }
    }
    out
}

fn tails_from_deviations(
    cfg: &TailExperimentConfig,
    // per replica, per t-grid slot: sup deviation across tracked members
    sup_devs: Vec<Vec<f64>>,
) -> TailEstimate {
    let mut cells = Vec::with_capacity(cfg.t_grid.len() * cfg.eps_grid.len());
    for (slot, &rounds) in cfg.t_grid.iter().enumerate() {
        for &eps in &cfg.eps_grid {
            let hits = sup_devs.iter().filter(|per_t| per_t[slot] >= eps).count();
            let frequency = hits as f64 / cfg.replicas as f64;
            cells.push(TailCell {
                rounds,
                eps,
                hits,
                frequency,
                cp_upper: clopper_pearson_upper(hits, cfg.replicas, cfg.confidence),
            });
        }
    }
    TailEstimate { cells, replicas: cfg.replicas, confidence: cfg.confidence }
}

/// Tail estimate for a single predictor: the fraction of replicas whose
/// empirical risk deviates from the exact expected risk by at least `eps`.
pub fn estimate_deviation_tail(
    model: &McreModel,
    f: &Hypothesis,
    loss: &LossFunction,
    cfg: &TailExperimentConfig,
) -> Result<TailEstimate> {
    cfg.validate()?;
    let ctx = ergodic_context(model)?;
    let expected = vec![expected_risk(f, &ctx.chain, &ctx.pi, loss)?];
    let members = vec![f];
    let devs: Vec<Vec<f64>> = (0..cfg.replicas)
        .into_par_iter()
        .map(|r| {
            replica_deviations(model, &ctx, &members, &expected, loss, cfg, r)
                .into_iter()
                .map(|per_member| per_member[0])
                .collect()
        })
        .collect();
    Ok(tails_from_deviations(cfg, devs))
}

/// Tail estimate for the supremum deviation over a finite class.
pub fn estimate_sup_deviation_tail(
    model: &McreModel,
    class: &HypothesisClass,
    loss: &LossFunction,
    cfg: &TailExperimentConfig,
) -> Result<TailEstimate> {
    cfg.validate()?;
    let ctx = ergodic_context(model)?;
    let members: Vec<&Hypothesis> = class.members().iter().collect();
    let expected: Vec<f64> = members
        .iter()
        .map(|f| expected_risk(f, &ctx.chain, &ctx.pi, loss))
        .collect::<Result<_>>()?;
    let devs: Vec<Vec<f64>> = (0..cfg.replicas)
        .into_par_iter()
        .map(|r| {
            replica_deviations(model, &ctx, &members, &expected, loss, cfg, r)
                .into_iter()
                .map(|per_member| per_member.into_iter().fold(0.0, f64::max))
                .collect()
        })
        .collect();
    Ok(tails_from_deviations(cfg, devs))
}

/// Outcome of one dominance cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CellVerdict {
    Pass,
    Fail,
    Inconclusive,
    Vacuous,
}

impl std::fmt::Display for CellVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            CellVerdict::Pass => "pass",
            CellVerdict::Fail => "fail",
            CellVerdict::Inconclusive => "inconclusive",
            CellVerdict::Vacuous => "vacuous",
        };
        write!(f, "{s}")
    }
}

/// One `(T, eps)` dominance comparison.
#[derive(Debug, Clone, serde::Serialize)]
pub struct DominanceCell {
    pub rounds: usize,
    pub eps: f64,
    pub hits: usize,
    pub frequency: f64,
    pub cp_upper: f64,
    /// Raw theorem bound before clamping (may exceed 1).
    pub bound_raw: f64,
    /// Bound clamped to 1.
    pub bound: f64,
    pub verdict: CellVerdict,
}

/// Cell-by-cell dominance comparison.
#[derive(Debug, Clone, serde::Serialize)]
pub struct DominanceReport {
    pub cells: Vec<DominanceCell>,
}

impl DominanceReport {
    pub fn count(&self, verdict: CellVerdict) -> usize {
        self.cells.iter().filter(|c| c.verdict == verdict).count()
    }

    /// True when no informative cell failed.
    pub fn no_failures(&self) -> bool {
        self.count(CellVerdict::Fail) == 0
    }
}

/// Compare a tail estimate against per-cell theorem bound values (aligned
/// with `est.cells`; `f64::INFINITY` marks cells where the bound's
/// precondition failed, which are reported vacuous).
pub fn dominance_check(est: &TailEstimate, bounds: &[f64]) -> Result<DominanceReport> {
    if bounds.len() != est.cells.len() {
        return Err(Error::Dimension(format!(
            "{} bound values for {} cells",
            bounds.len(),
            est.cells.len()
        )));
    }
    let cells = est
        .cells
        .iter()
        .zip(bounds.iter())
        .map(|(cell, &raw)| {
            let clamped = raw.min(1.0);
            let verdict = if raw >= 1.0 {
                CellVerdict::Vacuous
            } else if cell.cp_upper <= clamped {
                CellVerdict::Pass
            } else if cell.frequency > clamped {
                CellVerdict::Fail
            } else {
                CellVerdict::Inconclusive
            };
            DominanceCell {
                rounds: cell.rounds,
                eps: cell.eps,
                hits: cell.hits,
                frequency: cell.frequency,
                cp_upper: cell.cp_upper,
                bound_raw: raw,
                bound: clamped,
                verdict,
            }
        })
        .collect();
    Ok(DominanceReport { cells })
}

/// TV distance between the exact stationary distribution and the empirical
/// state occupancy of one stationary-start trajectory of `rounds` rounds.
pub fn pi_occupancy_check(model: &McreModel, rounds: usize, seed: u64) -> Result<f64> {
    let ctx = ergodic_context(model)?;
    let cfg = TrajectoryConfig {
        rounds,
        seed,
        stream: 0,
        start: StartMode::Stationary,
        record_users: false,
    };
    let traj = sample_trajectory(model, &cfg, Some((&ctx.chain, &ctx.pi)))?;
    occupancy_tv(&traj, &ctx.chain, &ctx.pi)
}

/// Empirical occupancy of a trajectory against a distribution over chain
/// states.
pub fn occupancy_tv(traj: &Trajectory, chain: &LiftedChain, pi: &[f64]) -> Result<f64> {
    let mut counts = vec![0.0f64; chain.len()];
    for z in &traj.states {
        let idx = chain.index_of(z).ok_or_else(|| {
            Error::Dimension("trajectory visited a state outside the chain".into())
        })?;
        counts[idx] += 1.0;
    }
    let inv = 1.0 / traj.len() as f64;
    for c in &mut counts {
        *c *= inv;
    }
    Ok(tv_distance_slice(&counts, pi))
}
