//! Gromov-Hausdorff distances between finite metric spaces.
//!
//! `d_GH(X, Y)` is half the least distortion of a correspondence between `X`
//! and `Y`. For small spaces it is computed exactly, either by visiting every
//! correspondence or by branch-and-bound. Distances to simplices `lambda Delta_m`
//! with `lambda >= 2 diam X` have a closed form through the mst-spectrum.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::metric::{diameter, scale, simplex, FiniteMetricSpace, SimplexSpec};
use crate::partitions::induced_partition;
use crate::spanning::{mst_spectrum, Spectrum};

/// Hard cap on the column space of the search: row masks are `u32` and a
/// per-mask diameter table is precomputed.
const MAX_MASK_BITS: usize = 20;

/// A relation between index ranges `0..nx` and `0..ny` whose projections are
/// both surjective. Pairs are kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Correspondence {
    pairs: Vec<(usize, usize)>,
    #[serde(skip)]
    nx: usize,
    #[serde(skip)]
    ny: usize,
}

impl Correspondence {
    pub fn new(nx: usize, ny: usize, mut pairs: Vec<(usize, usize)>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::EmptyRelation);
        }
        let mut hit_x = vec![false; nx];
        let mut hit_y = vec![false; ny];
        for &(i, j) in &pairs {
            if i >= nx {
                return Err(Error::IndexOutOfRange { index: i, size: nx });
            }
            if j >= ny {
                return Err(Error::IndexOutOfRange { index: j, size: ny });
            }
            hit_x[i] = true;
            hit_y[j] = true;
        }
        if !hit_x.iter().all(|&h| h) || !hit_y.iter().all(|&h| h) {
            return Err(Error::NotACorrespondence);
        }
        pairs.sort_unstable();
        pairs.dedup();
        Ok(Correspondence { pairs, nx, ny })
    }

    /// Every pair `(i, j)`.
    pub fn full(nx: usize, ny: usize) -> Self {
        let pairs = (0..nx).flat_map(|i| (0..ny).map(move |j| (i, j))).collect();
        Correspondence { pairs, nx, ny }
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn sizes(&self) -> (usize, usize) {
        (self.nx, self.ny)
    }

    pub fn transpose(&self) -> Self {
        let mut pairs: Vec<_> = self.pairs.iter().map(|&(i, j)| (j, i)).collect();
        pairs.sort_unstable();
        Correspondence { pairs, nx: self.ny, ny: self.nx }
    }

    /// True when some point of the first space is related to two or more
    /// points of the second. For a correspondence between `X` and a simplex
    /// this is false exactly when the preimages of the simplex vertices
    /// partition `X`.
    pub fn collapse_indicator(&self) -> bool {
        self.pairs.windows(2).any(|w| w[0].0 == w[1].0)
    }

    /// For each point of the second space, the points of the first related to it.
    pub fn preimages(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.ny];
        for &(i, j) in &self.pairs {
            out[j].push(i);
        }
        out
    }
}

/// `max | |x x'| - |y y'| |` over pairs of related pairs.
pub fn distortion(x: &FiniteMetricSpace, y: &FiniteMetricSpace, rel: &[(usize, usize)]) -> Result<f64> {
    if rel.is_empty() {
        return Err(Error::EmptyRelation);
    }
    for &(i, j) in rel {
        if i >= x.size() {
            return Err(Error::IndexOutOfRange { index: i, size: x.size() });
        }
        if j >= y.size() {
            return Err(Error::IndexOutOfRange { index: j, size: y.size() });
        }
    }
    let mut worst: f64 = 0.0;
    for (p, &(a, b)) in rel.iter().enumerate() {
        for &(c, d) in &rel[p + 1..] {
            worst = worst.max((x.d(a, c) - y.d(b, d)).abs());
        }
    }
    Ok(worst)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Exhaustive,
    BranchAndBound,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GhMethod {
    Exhaustive,
    BranchAndBound,
    ClosedForm,
}

impl GhMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            GhMethod::Exhaustive => "exhaustive",
            GhMethod::BranchAndBound => "branch_and_bound",
            GhMethod::ClosedForm => "closed_form",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GhResult {
    pub distance: f64,
    pub witness: Correspondence,
    pub method: GhMethod,
    pub nodes_explored: u64,
}

/// Depth-first search over correspondences: each row point gets a nonempty
/// set of column points (a bitmask), columns must all be covered at the end.
struct Search<'a> {
    rows: &'a FiniteMetricSpace,
    cols: &'a FiniteMetricSpace,
    order: Vec<usize>,
    masks: Vec<u32>,
    col_diam: Vec<f64>,
    full: u32,
    prune: bool,
    stop_at: f64,
    best: f64,
    best_masks: Option<Vec<u32>>,
    nodes: u64,
}

impl<'a> Search<'a> {
    fn new(rows: &'a FiniteMetricSpace, cols: &'a FiniteMetricSpace, prune: bool) -> Self {
        let nb = cols.size();
        let mut col_diam = vec![0.0f64; 1 << nb];
        for mask in 1u32..(1 << nb) {
            let low = mask.trailing_zeros() as usize;
            let rest = mask & (mask - 1);
            let mut d = col_diam[rest as usize];
            let mut r = rest;
            while r != 0 {
                let j = r.trailing_zeros() as usize;
                d = d.max(cols.d(low, j));
                r &= r - 1;
            }
            col_diam[mask as usize] = d;
        }
        let mut order: Vec<usize> = (0..rows.size()).collect();
        // decreasing eccentricity, ties by index
        order.sort_by(|&a, &b| rows.eccentricity(b).total_cmp(&rows.eccentricity(a)).then(a.cmp(&b)));
        Search {
            rows,
            cols,
            masks: vec![0; order.len()],
            order,
            col_diam,
            full: ((1u64 << nb) - 1) as u32,
            prune,
            stop_at: f64::NEG_INFINITY,
            best: f64::INFINITY,
            best_masks: None,
            nodes: 0,
        }
    }

    fn done(&self) -> bool {
        self.best <= self.stop_at
    }

    fn run(&mut self, depth: usize, current: f64, covered: u32) {
        self.nodes += 1;
        let na = self.order.len();
        if depth == na {
            if covered == self.full && current < self.best {
                self.best = current;
                self.best_masks = Some(self.masks.clone());
            }
            return;
        }
        let nb = self.cols.size();
        let row = self.order[depth];
        // cost of relating `row` to column y, against every pair already placed
        let mut cost = [0.0f64; MAX_MASK_BITS];
        for (y, c) in cost.iter_mut().enumerate().take(nb) {
            let mut worst: f64 = 0.0;
            for prev in 0..depth {
                let dr = self.rows.d(row, self.order[prev]);
                let mut m = self.masks[prev];
                while m != 0 {
                    let y2 = m.trailing_zeros() as usize;
                    worst = worst.max((dr - self.cols.d(y, y2)).abs());
                    m &= m - 1;
                }
            }
            *c = worst;
        }
        let mut allowed = self.full;
        if self.prune {
            for (y, &c) in cost.iter().enumerate().take(nb) {
                if current.max(c) >= self.best {
                    allowed &= !(1 << y);
                }
            }
        }
        let required = if depth + 1 == na { self.full & !covered } else { 0 };
        if required & !allowed != 0 {
            return;
        }
        // submasks of `allowed` containing `required`, in increasing order
        let free = allowed & !required;
        let mut sub: u32 = 0;
        loop {
            let s = sub | required;
            if s != 0 {
                let mut c = current.max(self.col_diam[s as usize]);
                let mut m = s;
                while m != 0 {
                    c = c.max(cost[m.trailing_zeros() as usize]);
                    m &= m - 1;
                }
                if !(self.prune && c >= self.best) {
                    self.masks[depth] = s;
                    self.run(depth + 1, c, covered | s);
                    self.masks[depth] = 0;
                    if self.done() {
                        return;
                    }
                }
            }
            if sub == free {
                break;
            }
            sub = (sub.wrapping_sub(free)) & free;
        }
    }

    fn pairs(&self, masks: &[u32]) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (depth, &mask) in masks.iter().enumerate() {
            let mut m = mask;
            while m != 0 {
                out.push((self.order[depth], m.trailing_zeros() as usize));
                m &= m - 1;
            }
        }
        out
    }
}

/// Rank-proportional matching of points sorted by eccentricity; `rows` must
/// be at least as large as `cols`, which makes the map onto.
fn greedy_pairs(rows: &FiniteMetricSpace, cols: &FiniteMetricSpace) -> Vec<(usize, usize)> {
    let by_ecc = |x: &FiniteMetricSpace| {
        let mut idx: Vec<usize> = (0..x.size()).collect();
        idx.sort_by(|&a, &b| x.eccentricity(b).total_cmp(&x.eccentricity(a)).then(a.cmp(&b)));
        idx
    };
    let (ra, rb) = (by_ecc(rows), by_ecc(cols));
    let (na, nb) = (rows.size(), cols.size());
    ra.iter()
        .enumerate()
        .map(|(rank, &i)| (i, rb[rank * nb / na]))
        .collect()
}

/// Exact `d_GH(X, Y)` under the default [`Limits`].
pub fn gh_exact(x: &FiniteMetricSpace, y: &FiniteMetricSpace, algorithm: Algorithm) -> Result<GhResult> {
    gh_exact_with(x, y, algorithm, &Limits::default())
}

pub fn gh_exact_with(
    x: &FiniteMetricSpace,
    y: &FiniteMetricSpace,
    algorithm: Algorithm,
    limits: &Limits,
) -> Result<GhResult> {
    let (nx, ny) = (x.size(), y.size());
    match algorithm {
        Algorithm::Exhaustive => {
            let product = nx * ny;
            if product > limits.max_exhaustive_product {
                return Err(Error::SizeLimitExceeded {
                    what: "exhaustive correspondence enumeration (|X|*|Y|)",
                    n: product,
                    limit: limits.max_exhaustive_product,
                });
            }
        }
        Algorithm::BranchAndBound => {
            let n = nx.max(ny);
            if n > limits.max_n {
                return Err(Error::SizeLimitExceeded {
                    what: "branch-and-bound correspondence search",
                    n,
                    limit: limits.max_n,
                });
            }
        }
    }
    // the larger space supplies the rows: fan-out per row is 2^|cols| - 1
    let swapped = nx < ny;
    let (rows, cols) = if swapped { (y, x) } else { (x, y) };
    if cols.size() > MAX_MASK_BITS {
        return Err(Error::SizeLimitExceeded {
            what: "correspondence search",
            n: cols.size(),
            limit: MAX_MASK_BITS,
        });
    }

    let prune = algorithm == Algorithm::BranchAndBound;
    let mut search = Search::new(rows, cols, prune);
    let mut witness_pairs = None;
    if prune {
        let greedy = greedy_pairs(rows, cols);
        search.best = distortion(rows, cols, &greedy)?;
        witness_pairs = Some(greedy);
        // any correspondence has distortion >= |diam X - diam Y|
        search.stop_at = (diameter(rows) - diameter(cols)).abs();
        if !search.done() {
            search.run(0, 0.0, 0);
        }
    } else {
        search.run(0, 0.0, 0);
    }
    if let Some(masks) = search.best_masks.clone() {
        witness_pairs = Some(search.pairs(&masks));
    }
    let pairs = witness_pairs.expect("at least one correspondence exists");
    let mut witness = Correspondence::new(rows.size(), cols.size(), pairs)?;
    if swapped {
        witness = witness.transpose();
    }
    Ok(GhResult {
        distance: search.best / 2.0,
        witness,
        method: if prune { GhMethod::BranchAndBound } else { GhMethod::Exhaustive },
        nodes_explored: search.nodes,
    })
}

/// `(d_GH(lambda X, lambda Y), lambda d_GH(X, Y))`.
pub fn gh_scaled_pair(
    x: &FiniteMetricSpace,
    y: &FiniteMetricSpace,
    lambda: f64,
    algorithm: Algorithm,
    limits: &Limits,
) -> Result<(f64, f64)> {
    let sx = scale(x, lambda)?;
    let sy = scale(y, lambda)?;
    let scaled = gh_exact_with(&sx, &sy, algorithm, limits)?.distance;
    let base = gh_exact_with(x, y, algorithm, limits)?.distance;
    Ok((scaled, lambda * base))
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::NonpositiveLambda(lambda));
    }
    Ok(())
}

fn closed_form_to_simplex(x: &FiniteMetricSpace, spectrum: &Spectrum, m: usize, lambda: f64) -> Result<GhResult> {
    let n = x.size();
    let (distance, pairs) = if m <= n {
        let sigma = spectrum.values()[m - 2];
        let part = induced_partition(x, m - 1)?;
        let pairs = part
            .blocks()
            .iter()
            .enumerate()
            .flat_map(|(b, block)| block.iter().map(move |&i| (i, b)))
            .collect();
        ((lambda - sigma) / 2.0, pairs)
    } else {
        let pairs = (0..m).map(|j| (j.min(n - 1), j)).collect();
        (lambda / 2.0, pairs)
    };
    Ok(GhResult {
        distance,
        witness: Correspondence::new(n, m, pairs)?,
        method: GhMethod::ClosedForm,
        nodes_explored: 0,
    })
}

/// `d_GH(X, lambda Delta_m)`.
///
/// Uses the closed form when `m = 1` or `lambda >= 2 diam X`; otherwise runs
/// branch-and-bound against the explicit simplex. The witness always relates
/// `X` (first) to the simplex (second).
pub fn gh_to_simplex(x: &FiniteMetricSpace, m: usize, lambda: f64) -> Result<GhResult> {
    gh_to_simplex_with(x, m, lambda, &Limits::default())
}

pub fn gh_to_simplex_with(x: &FiniteMetricSpace, m: usize, lambda: f64, limits: &Limits) -> Result<GhResult> {
    check_lambda(lambda)?;
    let spec = SimplexSpec::new(m, lambda)?;
    let n = x.size();
    let diam = diameter(x);
    if m == 1 {
        return Ok(GhResult {
            distance: diam / 2.0,
            witness: Correspondence::full(n, 1),
            method: GhMethod::ClosedForm,
            nodes_explored: 0,
        });
    }
    if lambda >= 2.0 * diam {
        return closed_form_to_simplex(x, &mst_spectrum(x), m, lambda);
    }
    gh_exact_with(x, &simplex(spec), Algorithm::BranchAndBound, limits)
}

fn require_large_lambda(x: &FiniteMetricSpace, lambda: f64) -> Result<()> {
    check_lambda(lambda)?;
    let required = 2.0 * diameter(x);
    if lambda < required {
        return Err(Error::LambdaTooSmall { lambda, required });
    }
    Ok(())
}

/// `sigma_k = lambda - 2 d_GH(X, lambda Delta_{k+1})` for `k = 1..n-1`.
pub fn spectrum_via_gh(x: &FiniteMetricSpace, lambda: f64) -> Result<Spectrum> {
    require_large_lambda(x, lambda)?;
    let spectrum = mst_spectrum(x);
    let values = (1..x.size())
        .map(|k| {
            closed_form_to_simplex(x, &spectrum, k + 1, lambda).map(|r| lambda - 2.0 * r.distance)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(Spectrum(values))
}

/// `lambda (n - 1) - 2 sum_k d_GH(X, lambda Delta_{k+1})`. Terms with `k + 1 > n`
/// vanish, so the sum stops at `k = n - 1`.
pub fn mst_length_via_gh(x: &FiniteMetricSpace, lambda: f64) -> Result<f64> {
    require_large_lambda(x, lambda)?;
    let spectrum = mst_spectrum(x);
    let mut sum = 0.0;
    for k in 1..x.size() {
        sum += closed_form_to_simplex(x, &spectrum, k + 1, lambda)?.distance;
    }
    Ok(lambda * (x.size() - 1) as f64 - 2.0 * sum)
}
