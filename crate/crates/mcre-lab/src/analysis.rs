//! Exact ergodic and mixing analysis of finite row-stochastic matrices.
//!
//! Everything here is computed on the support digraph or by explicit matrix
//! powers, so results are decisions, not estimates:
//!
//! - irreducibility: the support digraph is one strongly connected component;
//! - period: gcd of cycle lengths, via BFS level differences;
//! - primitivity index `n0`: smallest `n` with `M^n` entrywise positive,
//!   searched up to the Wielandt cap `Z^2 - 2Z + 2` (so "absent" proves the
//!   matrix is not primitive), with `delta` the minimum entry of `M^(n0)`;
//! - stationary distribution: power iteration with a direct linear-solve
//!   fallback;
//! - mixing profile: `beta(m) = sum_x pi(x) * TV(M^m(x,.), pi)`, the
//!   absolutely-regular coefficient of a stationary finite chain.

use ndarray::{Array1, Array2};

use crate::model::McreModel;
use crate::stochastic::tv_distance;
use crate::{Error, Result};

/// Ergodicity facts for one matrix.
#[derive(Debug, Clone, serde::Serialize)]
pub struct ErgodicityReport {
    pub irreducible: bool,
    /// Common period of all states; present only when irreducible.
    pub period: Option<usize>,
    /// Primitivity index, when the matrix is primitive.
    pub n0: Option<usize>,
    /// Minimum entry of `M^(n0)`.
    pub delta: Option<f64>,
    /// Wielandt bound `Z^2 - 2Z + 2` capping the `n0` search.
    pub wielandt_cap: usize,
}

/// Stationary distribution with its verification residual.
#[derive(Debug, Clone, serde::Serialize)]
pub struct StationaryDistribution {
    pub pi: Vec<f64>,
    /// `max_j |(pi M)_j - pi_j|` at the returned vector.
    pub residual: f64,
}

/// `beta(m)` for `m = 1..=m_max`.
#[derive(Debug, Clone, serde::Serialize)]
pub struct MixingProfile {
    pub betas: Vec<f64>,
}

impl MixingProfile {
    pub fn beta(&self, m: usize) -> f64 {
        self.betas[m - 1]
    }

    pub fn max_lag(&self) -> usize {
        self.betas.len()
    }
}

/// Per-feedback kernel failing the ergodicity assumption.
#[derive(Debug, Clone, serde::Serialize)]
pub struct KernelViolation {
    pub joint_feedback: usize,
    pub irreducible: bool,
    pub period: Option<usize>,
}

/// Result of checking the model assumptions: every joint kernel ergodic,
/// and every joint feedback reachable from every joint behavior.
#[derive(Debug, Clone, serde::Serialize)]
pub struct AssumptionReport {
    pub a1_ok: bool,
    pub a1_violations: Vec<KernelViolation>,
    pub a2_ok: bool,
    /// `(joint behavior, joint feedback)` pairs with zero induced mass.
    pub a2_violations: Vec<(usize, usize)>,
    /// Informative sufficient condition: every per-agent kernel is
    /// irreducible and aperiodic for every per-agent feedback value.
    pub per_agent_a1_ok: bool,
}

fn require_square(m: &Array2<f64>) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::Dimension(format!(
            "expected square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    if m.nrows() == 0 {
        return Err(Error::Dimension("empty matrix".into()));
    }
    Ok(m.nrows())
}

fn support_adjacency(m: &Array2<f64>) -> Vec<Vec<usize>> {
    let z = m.nrows();
    let mut adj = vec![Vec::new(); z];
    for i in 0..z {
        for j in 0..z {
            if m[(i, j)] > 0.0 {
                adj[i].push(j);
            }
        }
    }
    adj
}

/// True iff the support digraph of `m` is strongly connected.
pub fn is_irreducible(m: &Array2<f64>) -> Result<bool> {
    let z = require_square(m)?;
    let adj = support_adjacency(m);
    let mut radj = vec![Vec::new(); z];
    for (i, outs) in adj.iter().enumerate() {
        for &j in outs {
            radj[j].push(i);
        }
    }
    // Reachability from state 0 forwards and backwards covers everything
    // iff the graph is one SCC.
    Ok(reaches_all(&adj, z) && reaches_all(&radj, z))
}

fn reaches_all(adj: &[Vec<usize>], z: usize) -> bool {
    let mut seen = vec![false; z];
    let mut stack = vec![0usize];
    seen[0] = true;
    let mut count = 1;
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                count += 1;
                stack.push(w);
            }
        }
    }
    count == z
}

/// Common period of all states of an irreducible matrix: the gcd of all
/// cycle lengths, found from BFS level differences across support edges.
pub fn period(m: &Array2<f64>) -> Result<usize> {
    let z = require_square(m)?;
    if !is_irreducible(m)? {
        return Err(Error::Reducible);
    }
    let adj = support_adjacency(m);
    let mut level = vec![usize::MAX; z];
    level[0] = 0;
    let mut queue = std::collections::VecDeque::from([0usize]);
    let mut g: usize = 0;
    while let Some(v) = queue.pop_front() {
        for &w in &adj[v] {
            if level[w] == usize::MAX {
                level[w] = level[v] + 1;
                queue.push_back(w);
            } else {
                // Every support edge closes a walk of length
                // level[v] + 1 - level[w] relative to the BFS tree.
                let diff = (level[v] + 1).abs_diff(level[w]);
                g = gcd(g, diff);
            }
        }
    }
    Ok(if g == 0 { z } else { g })
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Wielandt's bound on the primitivity index of a `z`-state matrix.
pub fn wielandt_cap(z: usize) -> usize {
    if z == 1 {
        1
    } else {
        z * z - 2 * z + 2
    }
}

/// Smallest `n` (up to the Wielandt cap) with `M^n` entrywise positive,
/// together with the minimum entry of that power. `None` means the matrix
/// is not primitive: no power within the cap is positive, and by Wielandt's
/// bound no power ever is.
pub fn find_n0_delta(m: &Array2<f64>) -> Result<Option<(usize, f64)>> {
    let z = require_square(m)?;
    // A matrix is primitive iff irreducible and aperiodic; deciding that on
    // the support digraph avoids scanning powers of chains that can never
    // become positive.
    if !is_irreducible(m)? || period(m)? != 1 {
        return Ok(None);
    }
    let cap = wielandt_cap(z);
    let mut power = m.clone();
    for n in 1..=cap {
        let min = power.iter().cloned().fold(f64::INFINITY, f64::min);
        if min > 0.0 {
            return Ok(Some((n, min)));
        }
        if n < cap {
            power = power.dot(m);
        }
    }
    Ok(None)
}

/// Full ergodicity report for one matrix.
pub fn ergodicity_report(m: &Array2<f64>) -> Result<ErgodicityReport> {
    let z = require_square(m)?;
    let irreducible = is_irreducible(m)?;
    let period = if irreducible { Some(period(m)?) } else { None };
    let n0_delta = find_n0_delta(m)?;
    Ok(ErgodicityReport {
        irreducible,
        period,
        n0: n0_delta.map(|(n, _)| n),
        delta: n0_delta.map(|(_, d)| d),
        wielandt_cap: wielandt_cap(z),
    })
}

/// Iteration cap for power iteration.
const POWER_ITER_CAP: usize = 1_000_000;

/// Stationary distribution via power iteration from the uniform vector,
/// falling back to a direct solve of `(M^T - I) pi = 0` with normalization
/// when iteration stalls. The returned residual is always re-measured on
/// the final vector.
pub fn stationary_distribution(m: &Array2<f64>, tol: f64) -> Result<StationaryDistribution> {
    let z = require_square(m)?;
    let mut x = Array1::from_elem(z, 1.0 / z as f64);
    for _ in 0..POWER_ITER_CAP {
        let next = x.dot(m);
        let residual = x
            .iter()
            .zip(next.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        if residual <= tol {
            // x itself satisfies max|xM - x| = residual <= tol.
            return Ok(StationaryDistribution { pi: x.to_vec(), residual });
        }
        x = &next / next.sum();
    }
    let pi = stationary_direct_solve(m)?;
    let arr = Array1::from_vec(pi.clone());
    let residual = arr
        .dot(m)
        .iter()
        .zip(arr.iter())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    if residual > tol {
        return Err(Error::NoConvergence(POWER_ITER_CAP));
    }
    Ok(StationaryDistribution { pi, residual })
}

/// Solve `pi M = pi`, `sum pi = 1` directly: Gaussian elimination on
/// `M^T - I` with the last equation replaced by the normalization.
pub fn stationary_direct_solve(m: &Array2<f64>) -> Result<Vec<f64>> {
    let z = require_square(m)?;
    // a[i][j] x_j = b_i with a = (M^T - I), last row all ones.
    let mut a = vec![vec![0.0; z]; z];
    for i in 0..z {
        for j in 0..z {
            a[i][j] = m[(j, i)] - if i == j { 1.0 } else { 0.0 };
        }
    }
    for j in 0..z {
        a[z - 1][j] = 1.0;
    }
    let mut b = vec![0.0; z];
    b[z - 1] = 1.0;

    // partial pivoting
    for col in 0..z {
        let pivot = (col..z)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        if a[pivot][col].abs() < 1e-13 {
            return Err(Error::Precondition(
                "singular system: stationary distribution is not unique".into(),
            ));
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..z {
            let f = a[row][col] / a[col][col];
            if f == 0.0 {
                continue;
            }
            for j in col..z {
                a[row][j] -= f * a[col][j];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; z];
    for row in (0..z).rev() {
        let mut acc = b[row];
        for j in row + 1..z {
            acc -= a[row][j] * x[j];
        }
        x[row] = acc / a[row][row];
    }
    // Clean tiny negative round-off and renormalize.
    for v in &mut x {
        if *v < 0.0 {
            if *v < -1e-9 {
                return Err(Error::Precondition(
                    "direct solve produced a negative stationary entry".into(),
                ));
            }
            *v = 0.0;
        }
    }
    let total: f64 = x.iter().sum();
    for v in &mut x {
        *v /= total;
    }
    Ok(x)
}

/// Mixing coefficients `beta(m) = sum_x pi(x) * TV(M^m(x,.), pi)` for
/// `m = 1..=m_max`.
pub fn beta_mixing(m: &Array2<f64>, pi: &[f64], m_max: usize) -> Result<MixingProfile> {
    let z = require_square(m)?;
    if pi.len() != z {
        return Err(Error::Dimension(format!(
            "pi has length {}, matrix is {z}x{z}",
            pi.len()
        )));
    }
    if m_max < 1 {
        return Err(Error::InvalidArgument("m_max must be >= 1".into()));
    }
    let pi_arr = Array1::from_vec(pi.to_vec());
    let mut power = m.clone();
    let mut betas = Vec::with_capacity(m_max);
    for lag in 1..=m_max {
        let beta: f64 = power
            .rows()
            .into_iter()
            .zip(pi.iter())
            .map(|(row, &px)| px * tv_distance(row, pi_arr.view()))
            .sum();
        betas.push(beta);
        if lag < m_max {
            power = power.dot(m);
        }
    }
    Ok(MixingProfile { betas })
}

/// Check the two model assumptions: every joint kernel irreducible and
/// aperiodic, and every joint feedback reachable (positive induced mass)
/// from every joint behavior.
pub fn check_assumptions(model: &McreModel) -> Result<AssumptionReport> {
    let nh = model.joint_feedbacks().count();
    let nb = model.joint_behaviors().count();

    let mut a1_violations = Vec::new();
    for k in 0..nh {
        let kernel = model.joint_behavior_kernel(k)?;
        let irr = is_irreducible(&kernel)?;
        let per = if irr { Some(period(&kernel)?) } else { None };
        if !irr || per != Some(1) {
            a1_violations.push(KernelViolation { joint_feedback: k, irreducible: irr, period: per });
        }
    }

    let mut a2_violations = Vec::new();
    for m in 0..nb {
        let q = model.induced_feedback_distribution(m)?;
        for (k, &mass) in q.iter().enumerate() {
            if mass <= 0.0 {
                a2_violations.push((m, k));
            }
        }
    }

    let mut per_agent_ok = true;
    'outer: for agent in 0..model.agents() {
        for k in 0..model.feedback_space().len() {
            let kernel = model.kernel_set().kernel(agent, k);
            if !is_irreducible(kernel)? || period(kernel).map(|p| p != 1).unwrap_or(true) {
                per_agent_ok = false;
                break 'outer;
            }
        }
    }

    Ok(AssumptionReport {
        a1_ok: a1_violations.is_empty(),
        a1_violations,
        a2_ok: a2_violations.is_empty(),
        a2_violations,
        per_agent_a1_ok: per_agent_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn two_state() -> Array2<f64> {
        array![[0.9, 0.1], [0.2, 0.8]]
    }

    #[test]
    fn irreducibility_basics() {
        assert!(is_irreducible(&array![[0.5, 0.5], [0.5, 0.5]]).unwrap());
        // state 0 absorbing: no return path
        assert!(!is_irreducible(&array![[1.0, 0.0], [0.5, 0.5]]).unwrap());
        assert!(is_irreducible(&array![[1.0]]).unwrap());
    }

    /// Oracle: strong connectivity by boolean reachability powers.
    fn irreducible_by_boolean_powers(m: &Array2<f64>) -> bool {
        let z = m.nrows();
        let mut reach = vec![vec![false; z]; z];
        for i in 0..z {
            for j in 0..z {
                reach[i][j] = i == j || m[(i, j)] > 0.0;
            }
        }
        for _ in 0..z {
            let prev = reach.clone();
            for i in 0..z {
                for j in 0..z {
                    if !reach[i][j] {
                        reach[i][j] = (0..z).any(|k| prev[i][k] && prev[k][j]);
                    }
                }
            }
        }
        (0..z).all(|i| (0..z).all(|j| reach[i][j]))
    }

    #[test]
    fn irreducibility_agrees_with_boolean_power_oracle() {
        let mut rng = crate::rng::CounterRng::from_stream(77, 0);
        for _ in 0..200 {
            let z = 6;
            let mut m = Array2::zeros((z, z));
            for i in 0..z {
                // sparse random support, ~2 links per row
                let mut row = vec![0.0; z];
                for _ in 0..2 {
                    row[(rng.next_u64() % z as u64) as usize] += 0.5;
                }
                let s: f64 = row.iter().sum();
                for (j, v) in row.iter().enumerate() {
                    m[(i, j)] = v / s;
                }
            }
            assert_eq!(is_irreducible(&m).unwrap(), irreducible_by_boolean_powers(&m));
        }
    }

    #[test]
    fn period_basics() {
        assert_eq!(period(&two_state()).unwrap(), 1);
        assert_eq!(period(&array![[0.0, 1.0], [1.0, 0.0]]).unwrap(), 2);
        assert!(period(&array![[1.0, 0.0], [0.5, 0.5]]).is_err());
    }

    #[test]
    fn period_cycle_with_chord_matches_return_time_oracle() {
        // 3-cycle 0->1->2->0 plus chord 1->0: cycle lengths 3 and 2, gcd 1.
        let m = array![[0.0, 1.0, 0.0], [0.5, 0.0, 0.5], [1.0, 0.0, 0.0]];
        let got = period(&m).unwrap();
        // Oracle: gcd of return times to state 0 up to length 20 via boolean
        // matrix powers.
        let z = 3;
        let mut boolp = vec![vec![false; z]; z];
        for i in 0..z {
            for j in 0..z {
                boolp[i][j] = m[(i, j)] > 0.0;
            }
        }
        let base = boolp.clone();
        let mut g = 0usize;
        for d in 1..=20 {
            if d > 1 {
                let mut next = vec![vec![false; z]; z];
                for i in 0..z {
                    for j in 0..z {
                        next[i][j] = (0..z).any(|k| boolp[i][k] && base[k][j]);
                    }
                }
                boolp = next;
            }
            if boolp[0][0] {
                g = gcd(g, d);
            }
        }
        assert_eq!(got, g);
        assert_eq!(got, 1);
    }

    #[test]
    fn pure_cycle_without_chord_has_period_three() {
        let m = array![[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [1.0, 0.0, 0.0]];
        assert_eq!(period(&m).unwrap(), 3);
    }

    #[test]
    fn n0_delta_all_positive() {
        let m = array![[0.9, 0.1], [0.2, 0.8]];
        let (n0, delta) = find_n0_delta(&m).unwrap().unwrap();
        assert_eq!(n0, 1);
        assert_eq!(delta, 0.1);
    }

    #[test]
    fn n0_delta_absent_for_permutation() {
        let m = array![[0.0, 1.0], [1.0, 0.0]];
        assert!(find_n0_delta(&m).unwrap().is_none());
        // identity never mixes either
        let id: Array2<f64> = Array2::eye(3);
        assert!(find_n0_delta(&id).unwrap().is_none());
    }

    #[test]
    fn stationary_two_state_closed_form() {
        // pi = (b, a)/(a+b) for off-diagonal rates a=0.1, b=0.2.
        let sd = stationary_distribution(&two_state(), 1e-12).unwrap();
        assert!((sd.pi[0] - 2.0 / 3.0).abs() < 1e-10);
        assert!((sd.pi[1] - 1.0 / 3.0).abs() < 1e-10);
        assert!(sd.residual <= 1e-10);
    }

    #[test]
    fn stationary_doubly_stochastic_is_uniform() {
        let m = array![[0.5, 0.3, 0.2], [0.2, 0.5, 0.3], [0.3, 0.2, 0.5]];
        let sd = stationary_distribution(&m, 1e-12).unwrap();
        for p in &sd.pi {
            assert!((p - 1.0 / 3.0).abs() < 1e-10);
        }
    }

    #[test]
    fn power_iteration_matches_direct_solve() {
        let m = two_state();
        let iter = stationary_distribution(&m, 1e-12).unwrap();
        let direct = stationary_direct_solve(&m).unwrap();
        let tv = crate::stochastic::tv_distance_slice(&iter.pi, &direct);
        assert!(tv < 1e-8, "tv {tv}");
    }

    #[test]
    fn beta_zero_for_iid_rows() {
        // all rows already equal pi
        let m = array![[0.3, 0.7], [0.3, 0.7]];
        let profile = beta_mixing(&m, &[0.3, 0.7], 10).unwrap();
        for &b in &profile.betas {
            assert_eq!(b, 0.0);
        }
    }

    #[test]
    fn beta_identity_closed_form() {
        // beta(m) = 1 - 1/Z for every m when M = I and pi is uniform.
        let z = 4;
        let id: Array2<f64> = Array2::eye(z);
        let pi = vec![1.0 / z as f64; z];
        let profile = beta_mixing(&id, &pi, 5).unwrap();
        for &b in &profile.betas {
            assert!((b - (1.0 - 1.0 / z as f64)).abs() < 1e-15);
        }
    }

    #[test]
    fn beta_two_state_eigenvalue_closed_form() {
        // TV(M^m(x,.), pi) = pi_other(x) * lambda2^m, so
        // beta(m) = 2 pi0 pi1 lambda2^m with lambda2 = 0.7.
        let m = two_state();
        let pi = [2.0 / 3.0, 1.0 / 3.0];
        let profile = beta_mixing(&m, &pi, 30).unwrap();
        for lag in 1..=30 {
            let expected = 2.0 * pi[0] * pi[1] * 0.7f64.powi(lag as i32);
            assert!(
                (profile.beta(lag) - expected).abs() < 1e-9,
                "lag {lag}: {} vs {}",
                profile.beta(lag),
                expected
            );
        }
    }

    #[test]
    fn beta_rejects_bad_args() {
        let m = two_state();
        assert!(beta_mixing(&m, &[0.5, 0.5], 0).is_err());
        assert!(beta_mixing(&m, &[1.0], 5).is_err());
    }

    #[test]
    fn assumptions_positive_model_passes() {
        use crate::model::*;
        let b = BehaviorSpace::new(vec!["x".into(), "y".into()]).unwrap();
        let h = FeedbackSpace::new(vec!["g".into(), "d".into()]).unwrap();
        let u = UserFactorModel::new(vec!["u1".into(), "u2".into()], vec![0.3, 0.7]).unwrap();
        // eta hits both feedback values for every behavior
        let f = FeedbackFunction::new(vec![vec![0, 1], vec![1, 0]], 2, 2).unwrap();
        let k0 = array![[0.9, 0.1], [0.2, 0.8]];
        let k1 = array![[0.5, 0.5], [0.4, 0.6]];
        let ks = AgentKernelSet::new(vec![vec![k0, k1]], 2, 2).unwrap();
        let model = McreModel::new(b, h, u, f, ks).unwrap();
        let report = check_assumptions(&model).unwrap();
        assert!(report.a1_ok && report.a2_ok && report.per_agent_a1_ok);
    }

    #[test]
    fn assumptions_unreachable_feedback_fails_a2() {
        use crate::model::*;
        let b = BehaviorSpace::new(vec!["x".into()]).unwrap();
        let h = FeedbackSpace::new(vec!["g".into(), "d".into()]).unwrap();
        let u = UserFactorModel::new(vec!["u1".into(), "u2".into()], vec![0.3, 0.7]).unwrap();
        // feedback value 1 never produced
        let f = FeedbackFunction::new(vec![vec![0], vec![0]], 1, 2).unwrap();
        let one = array![[1.0]];
        let ks = AgentKernelSet::new(vec![vec![one.clone(), one]], 1, 2).unwrap();
        let model = McreModel::new(b, h, u, f, ks).unwrap();
        let report = check_assumptions(&model).unwrap();
        assert!(!report.a2_ok);
        assert_eq!(report.a2_violations, vec![(0, 1)]);
        assert!(report.a1_ok);
    }

    #[test]
    fn assumptions_periodic_kernel_fails_a1() {
        use crate::model::*;
        let b = BehaviorSpace::new(vec!["x".into(), "y".into()]).unwrap();
        let h = FeedbackSpace::new(vec!["g".into()]).unwrap();
        let u = UserFactorModel::new(vec!["u".into()], vec![1.0]).unwrap();
        let f = FeedbackFunction::new(vec![vec![0, 0]], 2, 1).unwrap();
        let flip = array![[0.0, 1.0], [1.0, 0.0]];
        let ks = AgentKernelSet::new(vec![vec![flip]], 2, 1).unwrap();
        let model = McreModel::new(b, h, u, f, ks).unwrap();
        let report = check_assumptions(&model).unwrap();
        assert!(!report.a1_ok);
        assert_eq!(report.a1_violations.len(), 1);
        assert_eq!(report.a1_violations[0].period, Some(2));
    }
}
