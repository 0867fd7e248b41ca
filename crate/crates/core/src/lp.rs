//! Dense tableau simplex for small linear programs.
//!
//! Solves `maximize c·x` subject to `A x <= b`, `x >= 0` with `b >= 0`, so the
//! origin is a feasible starting basis and no phase one is needed. Pivoting
//! follows Bland's rule, which rules out cycling on degenerate vertices. The
//! dual solution is read off the objective row under the slack columns.

use crate::error::{Error, Result};

const PIVOT_EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub objective: f64,
    pub primal: Vec<f64>,
    /// One multiplier per constraint row; optimal for the dual
    /// `minimize b·y` subject to `A^T y >= c`, `y >= 0`.
    pub dual: Vec<f64>,
    pub pivots: usize,
}

pub fn maximize(c: &[f64], a: &[Vec<f64>], b: &[f64]) -> Result<LpSolution> {
    let m = a.len();
    let n = c.len();
    if b.len() != m || a.iter().any(|row| row.len() != n) {
        return Err(Error::DimensionMismatch("constraint matrix shape".into()));
    }
    if b.iter().any(|&v| !(v >= 0.0)) {
        return Err(Error::LpNumericalFailure("right-hand side must be nonnegative".into()));
    }
    let width = n + m + 1;
    // rows 0..m constraints, row m objective (z - c·x = 0)
    let mut t = vec![vec![0.0; width]; m + 1];
    for i in 0..m {
        t[i][..n].copy_from_slice(&a[i]);
        t[i][n + i] = 1.0;
        t[i][width - 1] = b[i];
    }
    for j in 0..n {
        t[m][j] = -c[j];
    }
    let mut basis: Vec<usize> = (n..n + m).collect();
    let max_pivots = 50 * (n + m).max(1) * (n + m).max(1);
    let mut pivots = 0;

    while let Some(enter) = (0..n + m).find(|&j| t[m][j] < -PIVOT_EPS) {
        let mut leave: Option<(usize, f64)> = None;
        for i in 0..m {
            if t[i][enter] > PIVOT_EPS {
                let ratio = t[i][width - 1] / t[i][enter];
                leave = match leave {
                    None => Some((i, ratio)),
                    Some((r, best)) => {
                        if ratio < best - PIVOT_EPS
                            || (ratio <= best + PIVOT_EPS && basis[i] < basis[r])
                        {
                            Some((i, ratio))
                        } else {
                            Some((r, best))
                        }
                    }
                };
            }
        }
        let Some((row, _)) = leave else {
            return Err(Error::LpNumericalFailure("objective is unbounded".into()));
        };
        pivot(&mut t, row, enter);
        basis[row] = enter;
        pivots += 1;
        if pivots > max_pivots {
            return Err(Error::LpNumericalFailure(format!("no convergence after {pivots} pivots")));
        }
    }

    let mut primal = vec![0.0; n];
    for (i, &var) in basis.iter().enumerate() {
        if var < n {
            primal[var] = t[i][width - 1];
        }
    }
    let dual = (0..m).map(|i| t[m][n + i]).collect::<Vec<f64>>();
    let objective = t[m][width - 1];
    if !objective.is_finite() || primal.iter().chain(&dual).any(|v| !v.is_finite()) {
        return Err(Error::LpNumericalFailure("non-finite tableau entry".into()));
    }
    Ok(LpSolution { objective, primal, dual, pivots })
}

fn pivot(t: &mut [Vec<f64>], row: usize, col: usize) {
    let p = t[row][col];
    for v in t[row].iter_mut() {
        *v /= p;
    }
    let pivot_row = t[row].clone();
    for (i, r) in t.iter_mut().enumerate() {
        if i == row {
            continue;
        }
        let f = r[col];
        if f != 0.0 {
            for (v, pv) in r.iter_mut().zip(&pivot_row) {
                *v -= f * pv;
            }
            r[col] = 0.0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn textbook_problem() {
        // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18 -> (2, 6), 36
        let s = maximize(
            &[3.0, 5.0],
            &[vec![1.0, 0.0], vec![0.0, 2.0], vec![3.0, 2.0]],
            &[4.0, 12.0, 18.0],
        )
        .unwrap();
        assert!((s.objective - 36.0).abs() < 1e-12);
        assert!((s.primal[0] - 2.0).abs() < 1e-12);
        assert!((s.primal[1] - 6.0).abs() < 1e-12);
        // dual (0, 1.5, 1): b·y = 36
        let by: f64 = [4.0, 12.0, 18.0].iter().zip(&s.dual).map(|(b, y)| b * y).sum();
        assert!((by - 36.0).abs() < 1e-12);
        assert!((s.dual[1] - 1.5).abs() < 1e-12 && (s.dual[2] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_problem_terminates() {
        // Beale's cycling example (cycles under the largest-coefficient rule)
        let s = maximize(
            &[0.75, -150.0, 0.02, -6.0],
            &[
                vec![0.25, -60.0, -0.04, 9.0],
                vec![0.5, -90.0, -0.02, 3.0],
                vec![0.0, 0.0, 1.0, 0.0],
            ],
            &[0.0, 0.0, 1.0],
        )
        .unwrap();
        assert!((s.objective - 0.05).abs() < 1e-12);
    }

    #[test]
    fn unbounded_and_bad_input() {
        assert!(matches!(
            maximize(&[1.0], &[vec![-1.0]], &[1.0]),
            Err(Error::LpNumericalFailure(_))
        ));
        assert!(maximize(&[1.0], &[vec![1.0]], &[-1.0]).is_err());
        assert!(maximize(&[1.0, 1.0], &[vec![1.0]], &[1.0]).is_err());
    }

    #[test]
    fn empty_constraints() {
        let s = maximize(&[-1.0, 0.0], &[], &[]).unwrap();
        assert_eq!(s.objective, 0.0);
    }
}
