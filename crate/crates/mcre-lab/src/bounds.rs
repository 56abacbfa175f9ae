//! Concentration and uniform-convergence bound formulas.
//!
//! Raw values are returned unclamped (the pointwise formula can reach 2);
//! dominance checks clamp to 1 and mark such cells vacuous.

use crate::analysis::{ErgodicityReport, MixingProfile};
use crate::{Error, Result};

/// Minorization parameters for a primitive chain: after `m` steps every
/// row dominates `lambda` times the uniform distribution.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct DoeblinParams {
    pub m: usize,
    pub lambda: f64,
}

/// Read `(m, lambda) = (n0, Z * delta)` off an ergodicity report.
pub fn doeblin_from_chain(report: &ErgodicityReport, z: usize) -> Result<DoeblinParams> {
    let (n0, delta) = match (report.n0, report.delta) {
        (Some(n0), Some(delta)) => (n0, delta),
        _ => {
            return Err(Error::Precondition(
                "chain is not primitive: no positive power within the Wielandt cap".into(),
            ))
        }
    };
    let lambda = z as f64 * delta;
    // delta is the min entry of a stochastic matrix, so Z * delta <= 1.
    debug_assert!(lambda <= 1.0 + 1e-12);
    Ok(DoeblinParams { m: n0, lambda })
}

/// Tail bound on `P(|empirical - expected| >= eps)` for a single
/// predictor after `rounds` rounds:
///
/// ```text
/// 2 exp( - Z^2 d^2 (T e - 2 B n0 / (Z d))^2 / (2 T B^2 n0^2) )
/// ```
///
/// Requires `T > 2 B n0 / (Z d e)` strictly; the error names the smallest
/// admissible round count. The raw value may exceed 1 (up to 2); callers
/// doing dominance comparisons clamp it.
pub fn pointwise_bound(
    loss_bound: f64,
    n0: usize,
    delta: f64,
    z: usize,
    rounds: usize,
    eps: f64,
) -> Result<f64> {
    if loss_bound <= 0.0 || delta <= 0.0 || eps <= 0.0 || z == 0 || n0 == 0 {
        return Err(Error::InvalidArgument(
            "pointwise bound needs positive B, delta, eps, Z, n0".into(),
        ));
    }
    let zd = z as f64 * delta;
    let t = rounds as f64;
    let threshold = 2.0 * loss_bound * n0 as f64 / (zd * eps);
    if t <= threshold {
        return Err(Error::Precondition(format!(
            "rounds {rounds} <= 2*B*n0/(Z*delta*eps) = {threshold}; smallest admissible count is {}",
            (threshold.floor() as usize) + 1
        )));
    }
    let num = zd * zd * (t * eps - 2.0 * loss_bound * n0 as f64 / zd).powi(2);
    let den = 2.0 * t * loss_bound * loss_bound * (n0 as f64).powi(2);
    Ok(2.0 * (-num / den).exp())
}

/// Uniform tail bound over a whole class from a covering number at radius
/// `eps/16`, a block count `tau`, and the mixing coefficient at the block
/// length:
///
/// ```text
/// 16 N exp( - eps^2 tau / (128 B^2) ) + 2 tau beta
/// ```
pub fn uniform_bound(cover: usize, tau: usize, loss_bound: f64, eps: f64, beta_at_m: f64) -> f64 {
    16.0 * cover as f64 * (-eps * eps * tau as f64 / (128.0 * loss_bound * loss_bound)).exp()
        + 2.0 * tau as f64 * beta_at_m
}

/// A block partition of `rounds` into `2 * tau` blocks of length
/// `block_m`, truncating an indivisible tail.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct BlockScheme {
    pub tau: usize,
    pub block_m: usize,
    /// Rounds discarded so that `2 * tau * block_m` divides the usable
    /// prefix exactly.
    pub discarded: usize,
}

impl BlockScheme {
    /// Usable prefix length `2 * tau * block_m`.
    pub fn usable_rounds(&self) -> usize {
        2 * self.tau * self.block_m
    }
}

/// Partition `rounds` into blocks of length `block_m`.
pub fn block_scheme(rounds: usize, block_m: usize) -> Result<BlockScheme> {
    if block_m == 0 {
        return Err(Error::InvalidArgument("block length must be >= 1".into()));
    }
    let tau = rounds / (2 * block_m);
    if tau == 0 {
        return Err(Error::Precondition(format!(
            "rounds {rounds} too small for even one block pair of length {block_m}"
        )));
    }
    Ok(BlockScheme { tau, block_m, discarded: rounds - 2 * tau * block_m })
}

/// Parameters of an algebraically mixing profile `beta(m) <= beta0 m^-gamma`
/// and the block-length exponent choice `m = C T^(1/(1+s))`, `0 < s < gamma`.
#[derive(Debug, Clone, Copy, serde::Serialize, serde::Deserialize)]
pub struct MixingParams {
    pub beta0: f64,
    pub gamma: f64,
    pub s: f64,
    pub c: f64,
}

impl MixingParams {
    pub fn validate(&self) -> Result<()> {
        if self.beta0 < 0.0 || self.gamma < 0.0 {
            return Err(Error::InvalidArgument("beta0 and gamma must be >= 0".into()));
        }
        if !(self.s > 0.0 && self.s < self.gamma) {
            return Err(Error::InvalidArgument(format!(
                "s must satisfy 0 < s < gamma, got s = {}, gamma = {}",
                self.s, self.gamma
            )));
        }
        if self.c <= 0.0 {
            return Err(Error::InvalidArgument("C must be > 0".into()));
        }
        Ok(())
    }
}

/// Uniform bound specialized to an algebraically mixing profile at the
/// block length chosen by [`optimal_block_size`]:
///
/// ```text
/// 16 N exp( - eps^2 T^(s/(1+s)) / (256 B^2 C) ) + beta0 C^-(gamma+1) T^((s-gamma)/(1+s))
/// ```
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct CorollaryBound {
    pub params: MixingParams,
}

impl CorollaryBound {
    pub fn eval(&self, cover: usize, loss_bound: f64, eps: f64, rounds: usize) -> f64 {
        let p = &self.params;
        let t = rounds as f64;
        let first = 16.0
            * cover as f64
            * (-eps * eps * t.powf(p.s / (1.0 + p.s)) / (256.0 * loss_bound * loss_bound * p.c)).exp();
        let second = p.beta0 * p.c.powf(-(p.gamma + 1.0)) * t.powf((p.s - p.gamma) / (1.0 + p.s));
        first + second
    }
}

/// Block length `m = max(1, round(C T^(1/(1+s))))` for an algebraically
/// mixing chain, with the corresponding block count and specialized bound.
pub fn optimal_block_size(mix: &MixingParams, rounds: usize) -> Result<(BlockScheme, CorollaryBound)> {
    mix.validate()?;
    if rounds < 2 {
        return Err(Error::InvalidArgument("need at least 2 rounds".into()));
    }
    let m = (mix.c * (rounds as f64).powf(1.0 / (1.0 + mix.s))).round().max(1.0) as usize;
    let scheme = block_scheme(rounds, m)?;
    Ok((scheme, CorollaryBound { params: *mix }))
}

/// Fit `beta(m) <= beta0 m^-gamma` to a computed profile: least squares on
/// the log-log points, then `beta0` inflated minimally so the envelope
/// holds at every computed lag. Zero coefficients are excluded from the
/// fit (and trivially satisfy any envelope).
pub fn fit_algebraic_envelope(profile: &MixingProfile) -> Result<(f64, f64)> {
    let points: Vec<(f64, f64)> = profile
        .betas
        .iter()
        .enumerate()
        .filter(|(_, &b)| b > 0.0)
        .map(|(i, &b)| (((i + 1) as f64).ln(), b.ln()))
        .collect();
    if points.len() < 2 {
        return Err(Error::Precondition(
            "envelope fit needs at least 2 positive mixing coefficients".into(),
        ));
    }
    let n = points.len() as f64;
    let sx: f64 = points.iter().map(|p| p.0).sum();
    let sy: f64 = points.iter().map(|p| p.1).sum();
    let sxx: f64 = points.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = points.iter().map(|p| p.0 * p.1).sum();
    let denom = n * sxx - sx * sx;
    if denom.abs() < 1e-30 {
        return Err(Error::Precondition("degenerate lag grid for envelope fit".into()));
    }
    let slope = (n * sxy - sx * sy) / denom;
    let gamma = -slope;
    // Inflate the intercept so beta(m) <= beta0 m^-gamma everywhere.
    let beta0 = profile
        .betas
        .iter()
        .enumerate()
        .filter(|(_, &b)| b > 0.0)
        .map(|(i, &b)| b * ((i + 1) as f64).powf(gamma))
        .fold(0.0, f64::max);
    Ok((beta0, gamma))
}
