//! Finite metric spaces and the elementary operations on them.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative slack allowed in the triangle inequality.
pub const METRIC_EPS: f64 = 1e-9;

/// A finite metric space with labeled points.
///
/// Values of this type have always passed [`FiniteMetricSpace::new`], so every
/// consumer may rely on the metric axioms. Point indices follow label order.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteMetricSpace {
    labels: Vec<String>,
    dist: Vec<f64>,
    n: usize,
}

impl FiniteMetricSpace {
    /// Validates `matrix` against the metric axioms.
    ///
    /// Checks run in a fixed order (shape, labels, finiteness, diagonal,
    /// symmetry, positivity, triangle inequality) and the first violation is
    /// reported with its witnessing indices.
    pub fn new(labels: Vec<String>, matrix: &[Vec<f64>]) -> Result<Self> {
        let n = matrix.len();
        if n == 0 {
            return Err(Error::DimensionMismatch("matrix has no rows".into()));
        }
        if let Some((i, row)) = matrix.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(Error::DimensionMismatch(format!(
                "row {i} has {} entries, expected {n}",
                row.len()
            )));
        }
        if labels.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "{} labels for a {n}x{n} matrix",
                labels.len()
            )));
        }
        let mut seen = HashSet::with_capacity(n);
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        for (i, row) in matrix.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(Error::NonFinite(i, j));
                }
            }
        }
        for (i, row) in matrix.iter().enumerate() {
            if row[i] != 0.0 {
                return Err(Error::NonzeroDiagonal(i));
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if matrix[i][j] != matrix[j][i] {
                    return Err(Error::NotSymmetric(i, j));
                }
                if matrix[i][j] <= 0.0 {
                    return Err(Error::NegativeOrZeroOffDiagonal(i, j));
                }
            }
        }
        for i in 0..n {
            for k in i + 1..n {
                for j in 0..n {
                    if j == i || j == k {
                        continue;
                    }
                    let bound = matrix[i][j] + matrix[j][k];
                    if matrix[i][k] > bound * (1.0 + METRIC_EPS) {
                        return Err(Error::TriangleViolation(i, k, j));
                    }
                }
            }
        }
        Ok(FiniteMetricSpace {
            labels,
            dist: matrix.iter().flatten().copied().collect(),
            n,
        })
    }

    /// Like [`new`](Self::new) with labels `p1..pn`.
    pub fn from_matrix(matrix: &[Vec<f64>]) -> Result<Self> {
        let labels = (1..=matrix.len()).map(|i| format!("p{i}")).collect();
        Self::new(labels, matrix)
    }

    /// Single point labeled `label`.
    pub fn point(label: &str) -> Self {
        FiniteMetricSpace {
            labels: vec![label.to_string()],
            dist: vec![0.0],
            n: 1,
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    #[inline]
    pub fn d(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.dist[i * self.n..(i + 1) * self.n]
    }

    pub fn matrix(&self) -> Vec<Vec<f64>> {
        self.dist.chunks(self.n).map(<[f64]>::to_vec).collect()
    }

    /// Largest distance from `i` to any point.
    pub fn eccentricity(&self, i: usize) -> f64 {
        self.row(i).iter().copied().fold(0.0, f64::max)
    }

    /// The subspace on `indices`, in the given order.
    pub fn subspace(&self, indices: &[usize]) -> Result<Self> {
        self.check_indices(indices)?;
        let mut seen = HashSet::new();
        let mut dist = Vec::with_capacity(indices.len() * indices.len());
        for &i in indices {
            if !seen.insert(i) {
                return Err(Error::DuplicateLabel(self.labels[i].clone()));
            }
            for &j in indices {
                dist.push(self.d(i, j));
            }
        }
        if indices.is_empty() {
            return Err(Error::EmptySubset);
        }
        Ok(FiniteMetricSpace {
            labels: indices.iter().map(|&i| self.labels[i].clone()).collect(),
            dist,
            n: indices.len(),
        })
    }

    fn check_indices(&self, indices: &[usize]) -> Result<()> {
        match indices.iter().find(|&&i| i >= self.n) {
            Some(&index) => Err(Error::IndexOutOfRange { index, size: self.n }),
            None => Ok(()),
        }
    }
}

/// Free-function form of [`FiniteMetricSpace::new`].
pub fn validate_metric(matrix: &[Vec<f64>], labels: Vec<String>) -> Result<FiniteMetricSpace> {
    FiniteMetricSpace::new(labels, matrix)
}

/// Maximum pairwise distance; 0 for a one-point space.
pub fn diameter(x: &FiniteMetricSpace) -> f64 {
    x.dist.iter().copied().fold(0.0, f64::max)
}

/// `|AB| = min |ab|` over `a in A`, `b in B`.
pub fn set_distance(x: &FiniteMetricSpace, a: &[usize], b: &[usize]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySubset);
    }
    x.check_indices(a)?;
    x.check_indices(b)?;
    let mut best = f64::INFINITY;
    for &i in a {
        for &j in b {
            best = best.min(x.d(i, j));
        }
    }
    Ok(best)
}

/// Hausdorff distance between two nonempty subsets, in max-sup-inf form.
pub fn hausdorff_distance(x: &FiniteMetricSpace, a: &[usize], b: &[usize]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySubset);
    }
    x.check_indices(a)?;
    x.check_indices(b)?;
    let directed = |from: &[usize], to: &[usize]| {
        from.iter()
            .map(|&p| to.iter().map(|&q| x.d(p, q)).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    Ok(directed(a, b).max(directed(b, a)))
}

/// `lambda X`: every distance multiplied by `lambda`.
pub fn scale(x: &FiniteMetricSpace, lambda: f64) -> Result<FiniteMetricSpace> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::NonpositiveLambda(lambda));
    }
    Ok(FiniteMetricSpace {
        labels: x.labels.clone(),
        dist: x.dist.iter().map(|v| v * lambda).collect(),
        n: x.n,
    })
}

/// Parameters of the simplex `lambda Delta_n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimplexSpec {
    pub n: usize,
    pub lambda: f64,
}

impl SimplexSpec {
    pub fn new(n: usize, lambda: f64) -> Result<Self> {
        if n < 1 {
            return Err(Error::TooFewPoints { what: "simplex", n, min: 1 });
        }
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::NonpositiveLambda(lambda));
        }
        Ok(SimplexSpec { n, lambda })
    }
}

/// `n` points labeled `1..n`, all nonzero distances equal to `lambda`.
pub fn simplex(spec: SimplexSpec) -> FiniteMetricSpace {
    let SimplexSpec { n, lambda } = spec;
    let dist = (0..n * n)
        .map(|idx| if idx / n == idx % n { 0.0 } else { lambda })
        .collect();
    FiniteMetricSpace {
        labels: (1..=n).map(|i| i.to_string()).collect(),
        dist,
        n,
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    /// Four points on a line at 0, 0.1, 0.3, 0.45.
    pub fn w4() -> FiniteMetricSpace {
        FiniteMetricSpace::from_matrix(&[
            vec![0.0, 0.1, 0.3, 0.45],
            vec![0.1, 0.0, 0.2, 0.35],
            vec![0.3, 0.2, 0.0, 0.15],
            vec![0.45, 0.35, 0.15, 0.0],
        ])
        .unwrap()
    }

    pub fn delta(n: usize, lambda: f64) -> FiniteMetricSpace {
        simplex(SimplexSpec::new(n, lambda).unwrap())
    }
}
