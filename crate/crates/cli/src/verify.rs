//! Cross-checks every identity between the independent routes on one space.

use ghmst::gh::{gh_exact_with, gh_scaled_pair, gh_to_simplex_with, mst_length_via_gh, spectrum_via_gh, Algorithm};
use ghmst::partitions::spectrum_vector_via_partitions;
use ghmst::spanning::all_minimum_spanning_trees_with;
use ghmst::{diameter, mst_length, mst_spectrum, simplex, Error, FiniteMetricSpace, Limits, Result, SimplexSpec};
use serde::Serialize;

/// Largest size for which the correspondence-search checks run.
pub const GH_CHECK_MAX_N: usize = 5;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub lhs: Vec<f64>,
    pub rhs: Vec<f64>,
    pub abs_diff: f64,
    pub pass: bool,
    pub skipped: bool,
}

impl Check {
    fn compare(name: &'static str, lhs: Vec<f64>, rhs: Vec<f64>, tol: f64) -> Self {
        let abs_diff = if lhs.len() == rhs.len() {
            lhs.iter().zip(&rhs).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
        } else {
            f64::INFINITY
        };
        Check { name, pass: abs_diff <= tol, lhs, rhs, abs_diff, skipped: false }
    }

    fn skipped(name: &'static str) -> Self {
        Check { name, lhs: vec![], rhs: vec![], abs_diff: 0.0, pass: true, skipped: true }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verification {
    pub lambda: f64,
    pub size: usize,
    pub checks: Vec<Check>,
    pub all_pass: bool,
}

pub fn default_lambda(x: &FiniteMetricSpace) -> f64 {
    let diam = diameter(x);
    if diam > 0.0 { 2.0 * diam } else { 1.0 }
}

pub fn verify(x: &FiniteMetricSpace, lambda: Option<f64>, limits: &Limits) -> Result<Verification> {
    let n = x.size();
    if n > limits.max_n {
        return Err(Error::SizeLimitExceeded { what: "verify", n, limit: limits.max_n });
    }
    let lambda = lambda.unwrap_or_else(|| default_lambda(x));
    let tol = 1e-12 * lambda.max(1.0);
    let spectrum = mst_spectrum(x).0;
    let gh_ok = n <= GH_CHECK_MAX_N;
    let mut checks = Vec::with_capacity(7);

    checks.push(Check::compare(
        "spectrum_mst_vs_partitions",
        spectrum.clone(),
        spectrum_vector_via_partitions(x, limits)?,
        tol,
    ));
    checks.push(Check::compare(
        "spectrum_mst_vs_gh",
        spectrum.clone(),
        spectrum_via_gh(x, lambda)?.0,
        tol,
    ));

    if gh_ok {
        let mut closed = Vec::new();
        let mut exact = Vec::new();
        for m in 2..=n {
            closed.push(gh_to_simplex_with(x, m, lambda, limits)?.distance);
            let target = simplex(SimplexSpec::new(m, lambda)?);
            exact.push(gh_exact_with(x, &target, Algorithm::BranchAndBound, limits)?.distance);
        }
        checks.push(Check::compare("gh_closed_form_vs_exact", closed, exact, tol));

        let target = simplex(SimplexSpec::new(n + 1, lambda)?);
        let far = gh_exact_with(x, &target, Algorithm::BranchAndBound, limits)?.distance;
        checks.push(Check::compare("gh_to_larger_simplex", vec![far], vec![lambda / 2.0], tol));
    } else {
        checks.push(Check::skipped("gh_closed_form_vs_exact"));
        checks.push(Check::skipped("gh_to_larger_simplex"));
    }

    checks.push(Check::compare(
        "mst_vs_mst_length_via_gh",
        vec![mst_length(x)],
        vec![mst_length_via_gh(x, lambda)?],
        tol,
    ));

    let trees = all_minimum_spanning_trees_with(x, limits)?;
    let mut worst = spectrum.clone();
    let mut worst_diff = 0.0f64;
    for t in &trees {
        let other = t.sorted_lengths();
        let diff = if other.len() == spectrum.len() {
            other.iter().zip(&spectrum).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
        } else {
            f64::INFINITY
        };
        if diff > worst_diff {
            worst_diff = diff;
            worst = other;
        }
    }
    checks.push(Check::compare("spectra_equal_across_all_msts", spectrum, worst, 0.0));

    if gh_ok {
        let other = if n > 1 { x.subspace(&(0..n - 1).collect::<Vec<_>>())? } else { x.clone() };
        let (scaled, base) = gh_scaled_pair(x, &other, 2.0, Algorithm::BranchAndBound, limits)?;
        let mut c = Check::compare("scale_homothety", vec![scaled], vec![base], 0.0);
        c.pass = c.abs_diff <= 1e-12 * base.abs().max(f64::MIN_POSITIVE) || c.abs_diff == 0.0;
        checks.push(c);
    } else {
        checks.push(Check::skipped("scale_homothety"));
    }

    let all_pass = checks.iter().all(|c| c.pass);
    Ok(Verification { lambda, size: n, checks, all_pass })
}
