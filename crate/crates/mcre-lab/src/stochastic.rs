//! Small helpers for probability vectors and row-stochastic matrices.

use ndarray::{Array2, ArrayView1};

use crate::{Error, Result};

/// Input tolerance for probability data supplied by the user.
pub const INPUT_TOL: f64 = 1e-12;

/// Tolerance for matrices derived by accumulation (products, sums).
pub const DERIVED_TOL: f64 = 1e-9;

/// Check that `v` is a probability vector: entrywise `>= 0`, sums to 1
/// within `tol`.
pub fn check_probability_vector(v: &[f64], tol: f64, what: &str) -> Result<()> {
    let mut sum = 0.0;
    for (i, &p) in v.iter().enumerate() {
        if !p.is_finite() || p < 0.0 {
            return Err(Error::Model(format!("{what}: entry {i} is {p}, must be >= 0")));
        }
        sum += p;
    }
    if (sum - 1.0).abs() > tol {
        return Err(Error::Model(format!("{what}: sums to {sum}, expected 1 within {tol}")));
    }
    Ok(())
}

/// Check that every row of `m` is a probability vector within `tol`.
pub fn check_row_stochastic(m: &Array2<f64>, tol: f64, what: &str) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::Dimension(format!(
            "{what}: expected square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    for (i, row) in m.rows().into_iter().enumerate() {
        check_probability_vector(row.as_slice().unwrap(), tol, &format!("{what} row {i}"))?;
    }
    Ok(())
}

/// Total variation distance between two probability vectors of equal length.
pub fn tv_distance(p: ArrayView1<f64>, q: ArrayView1<f64>) -> f64 {
    debug_assert_eq!(p.len(), q.len());
    0.5 * p.iter().zip(q.iter()).map(|(a, b)| (a - b).abs()).sum::<f64>()
}

/// Total variation distance between two slices.
pub fn tv_distance_slice(p: &[f64], q: &[f64]) -> f64 {
    debug_assert_eq!(p.len(), q.len());
    0.5 * p.iter().zip(q.iter()).map(|(a, b)| (a - b).abs()).sum::<f64>()
}
