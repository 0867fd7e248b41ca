//! Random finite metric spaces for property tests and the verification harness.
//!
//! Uniform random weights on the complete graph are repaired into a metric by
//! taking shortest-path distances.

use rand::Rng;

use crate::metric::FiniteMetricSpace;

fn metricize(mut m: Vec<Vec<f64>>) -> FiniteMetricSpace {
    let n = m.len();
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = m[i][k] + m[k][j];
                if via < m[i][j] {
                    m[i][j] = via;
                }
            }
        }
    }
    FiniteMetricSpace::from_matrix(&m).expect("shortest-path distances form a metric")
}

fn symmetric<R: Rng + ?Sized>(rng: &mut R, n: usize, mut draw: impl FnMut(&mut R) -> f64) -> Vec<Vec<f64>> {
    let mut m = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let v = draw(rng);
            m[i][j] = v;
            m[j][i] = v;
        }
    }
    m
}

/// Uniform weights in `[0.1, 1)`, shortest-path repaired.
pub fn random_metric<R: Rng + ?Sized>(rng: &mut R, n: usize) -> FiniteMetricSpace {
    metricize(symmetric(rng, n, |r| r.random_range(0.1..1.0)))
}

/// Weights drawn from `{0.25, 0.5, 0.75, 1.0}`, so many distances coincide.
pub fn random_metric_with_ties<R: Rng + ?Sized>(rng: &mut R, n: usize) -> FiniteMetricSpace {
    metricize(symmetric(rng, n, |r| 0.25 * r.random_range(1..=4) as f64))
}

/// [`random_metric`] rescaled so the diameter is exactly `target`.
pub fn random_metric_with_diameter<R: Rng + ?Sized>(rng: &mut R, n: usize, target: f64) -> FiniteMetricSpace {
    let x = random_metric(rng, n);
    if n == 1 {
        return x;
    }
    let diam = crate::metric::diameter(&x);
    let m: Vec<Vec<f64>> = x
        .matrix()
        .into_iter()
        .map(|row| row.into_iter().map(|v| v / diam * target).collect())
        .collect();
    FiniteMetricSpace::new(x.labels().to_vec(), &m).expect("rescaling preserves the metric axioms")
}

/// Points of the plane with coordinates in `[0, 1)^2`, Euclidean distances.
pub fn random_planar<R: Rng + ?Sized>(rng: &mut R, n: usize) -> FiniteMetricSpace {
    loop {
        let pts: Vec<(f64, f64)> = (0..n).map(|_| (rng.random(), rng.random())).collect();
        let m: Vec<Vec<f64>> = pts
            .iter()
            .map(|a| pts.iter().map(|b| (a.0 - b.0).hypot(a.1 - b.1)).collect())
            .collect();
        if let Ok(x) = FiniteMetricSpace::from_matrix(&m) {
            return x;
        }
    }
}
