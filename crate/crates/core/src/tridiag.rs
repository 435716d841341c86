//! Tridiagonal solver (Thomas algorithm).
//!
//! ```text
//! lower[i] x[i-1] + diag[i] x[i] + upper[i] x[i+1] = rhs[i]
//! ```
//!
//! `lower[0]` and `upper[n-1]` are ignored.

use crate::error::{Error, Result};

/// Solve a tridiagonal system in place; `rhs` is overwritten with the solution.
///
/// No pivoting: intended for diagonally dominant or SPD matrices. A zero
/// pivot is reported as an error.
pub fn solve_in_place(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &mut [f64]) -> Result<()> {
    let n = rhs.len();
    if lower.len() != n || diag.len() != n || upper.len() != n {
        return Err(Error::LinearSolve(format!(
            "tridiagonal bands have lengths {}/{}/{} for {n} unknowns",
            lower.len(),
            diag.len(),
            upper.len()
        )));
    }
    if n == 0 {
        return Ok(());
    }
    let mut c = vec![0.0; n];
    let mut pivot = diag[0];
    if pivot == 0.0 || !pivot.is_finite() {
        return Err(Error::LinearSolve("zero pivot in row 0".into()));
    }
    c[0] = upper[0] / pivot;
    rhs[0] /= pivot;
    for i in 1..n {
        pivot = diag[i] - lower[i] * c[i - 1];
        if pivot == 0.0 || !pivot.is_finite() {
            return Err(Error::LinearSolve(format!("zero pivot in row {i}")));
        }
        c[i] = upper[i] / pivot;
        rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / pivot;
    }
    for i in (0..n - 1).rev() {
        rhs[i] -= c[i] * rhs[i + 1];
    }
    Ok(())
}

/// Solve a symmetric Toeplitz tridiagonal system `off x[i-1] + diag x[i] + off x[i+1] = rhs[i]`.
pub fn solve_toeplitz(diag: f64, off: f64, rhs: &mut [f64]) -> Result<()> {
    let n = rhs.len();
    let lower = vec![off; n];
    let d = vec![diag; n];
    solve_in_place(&lower, &d, &lower, rhs)
}

/// `y = T x` for the same band layout.
pub fn multiply(lower: &[f64], diag: &[f64], upper: &[f64], x: &[f64]) -> Vec<f64> {
    let n = x.len();
    (0..n)
        .map(|i| {
            let mut y = diag[i] * x[i];
            if i > 0 {
                y += lower[i] * x[i - 1];
            }
            if i + 1 < n {
                y += upper[i] * x[i + 1];
            }
            y
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_small_system() {
        // [2 -1 0; -1 2 -1; 0 -1 2] x = [1 0 1] has x = [1 1 1]
        let mut rhs = [1.0, 0.0, 1.0];
        solve_toeplitz(2.0, -1.0, &mut rhs).unwrap();
        for v in rhs {
            assert!((v - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn general_round_trip() {
        let n = 17;
        let lower: Vec<f64> = (0..n).map(|i| -0.3 - 0.01 * i as f64).collect();
        let upper: Vec<f64> = (0..n).map(|i| -0.7 + 0.02 * i as f64).collect();
        let diag: Vec<f64> = (0..n).map(|i| 3.0 + (i % 3) as f64).collect();
        let x: Vec<f64> = (0..n).map(|i| (i as f64).sin()).collect();
        let mut b = multiply(&lower, &diag, &upper, &x);
        solve_in_place(&lower, &diag, &upper, &mut b).unwrap();
        for (a, e) in b.iter().zip(&x) {
            assert!((a - e).abs() < 1e-14);
        }
    }

    #[test]
    fn zero_pivot_is_an_error() {
        let mut rhs = [1.0, 1.0];
        assert!(solve_toeplitz(0.0, 1.0, &mut rhs).is_err());
        let mut rhs = [1.0, 1.0];
        assert!(solve_in_place(&[0.0; 2], &[1.0; 2], &[0.0; 3], &mut rhs).is_err());
    }
}
