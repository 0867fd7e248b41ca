//! Minimal fillings of finite metric spaces.
//!
//! A filling of `M` is a weighted tree whose leaves are the points of `M` and
//! whose leaf-to-leaf path lengths dominate the distances of `M`. For a fixed
//! binary topology the cheapest weights solve a small linear program; the
//! minimal-filling length `mf(M)` is the best value over all topologies
//! (higher-degree vertices appear as zero-weight edges).
//!
//! [`mf_upper_bound_search`] reaches the same quantity from the other side,
//! by searching over metric extensions `V ⊇ M` with `#V <= 2#M - 2` and
//! evaluating `mst(V)` through Gromov-Hausdorff distances to simplices.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gh::mst_length_via_gh;
use crate::limits::Limits;
use crate::lp;
use crate::metric::{diameter, FiniteMetricSpace};
use crate::spanning::mst_length;

/// A tree with leaves `0..leaf_count` and internal vertices numbered from
/// `leaf_count`; every internal vertex has degree three.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SteinerTopology {
    pub leaf_count: usize,
    pub internal_count: usize,
    pub edges: Vec<(usize, usize)>,
}

impl SteinerTopology {
    pub fn vertex_count(&self) -> usize {
        self.leaf_count + self.internal_count
    }

    fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.vertex_count()];
        for (e, &(a, b)) in self.edges.iter().enumerate() {
            adj[a].push((b, e));
            adj[b].push((a, e));
        }
        adj
    }

    /// Edge indices on the path between two vertices.
    pub fn path(&self, from: usize, to: usize) -> Vec<usize> {
        let adj = self.adjacency();
        let mut via = vec![None; self.vertex_count()];
        let mut stack = vec![from];
        let mut seen = vec![false; self.vertex_count()];
        seen[from] = true;
        while let Some(v) = stack.pop() {
            for &(w, e) in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    via[w] = Some((v, e));
                    stack.push(w);
                }
            }
        }
        let mut out = Vec::new();
        let mut cur = to;
        while let Some((prev, e)) = via[cur] {
            out.push(e);
            cur = prev;
        }
        out.reverse();
        out
    }

    /// Leaf bipartitions induced by the edges, each as the bitmask of the side
    /// without leaf 0, sorted. Two topologies are equal iff their codes are.
    pub fn canonical_code(&self) -> Vec<u64> {
        let adj = self.adjacency();
        let mut code: Vec<u64> = self
            .edges
            .iter()
            .enumerate()
            .map(|(e, &(a, b))| {
                // leaves reachable from b without crossing e
                let mut mask = 0u64;
                let mut stack = vec![(b, a)];
                while let Some((v, parent)) = stack.pop() {
                    if v < self.leaf_count {
                        mask |= 1 << v;
                    }
                    for &(w, f) in &adj[v] {
                        if w != parent && f != e {
                            stack.push((w, v));
                        }
                    }
                }
                if mask & 1 == 1 {
                    mask ^= (1u64 << self.leaf_count) - 1;
                }
                mask
            })
            .collect();
        code.sort_unstable();
        code
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertex_count()];
        for &(a, b) in &self.edges {
            deg[a] += 1;
            deg[b] += 1;
        }
        deg
    }
}

/// `(2n - 5)!!` for `n >= 3`, 1 for `n = 2`.
pub fn topology_count(n: usize) -> usize {
    (3..=n).map(|k| 2 * k - 5).product()
}

/// All binary topologies with `n` labeled leaves.
///
/// Built by inserting leaf `3, 4, ...` into each edge of the previous tree in
/// turn, starting from the star on leaves `0, 1, 2`.
pub fn enumerate_topologies(n: usize) -> Result<Vec<SteinerTopology>> {
    enumerate_topologies_with(n, &Limits::default())
}

pub fn enumerate_topologies_with(n: usize, limits: &Limits) -> Result<Vec<SteinerTopology>> {
    if n < 2 {
        return Err(Error::TooFewPoints { what: "topology enumeration", n, min: 2 });
    }
    if n > limits.max_topology_leaves || n > 60 {
        return Err(Error::SizeLimitExceeded {
            what: "topology enumeration",
            n,
            limit: limits.max_topology_leaves,
        });
    }
    if n == 2 {
        return Ok(vec![SteinerTopology { leaf_count: 2, internal_count: 0, edges: vec![(0, 1)] }]);
    }
    let hub = n;
    let star = vec![(0, hub), (1, hub), (2, hub)];
    let mut out = Vec::with_capacity(topology_count(n));
    grow(n, 3, star, &mut out);
    Ok(out)
}

fn grow(n: usize, leaf: usize, edges: Vec<(usize, usize)>, out: &mut Vec<SteinerTopology>) {
    if leaf == n {
        out.push(SteinerTopology { leaf_count: n, internal_count: n - 2, edges });
        return;
    }
    let fresh = n + leaf - 2;
    for e in 0..edges.len() {
        let (a, b) = edges[e];
        let mut next = edges.clone();
        next[e] = (a, fresh);
        next.push((fresh, b));
        next.push((leaf, fresh));
        grow(n, leaf + 1, next, out);
    }
}

/// Optimal edge weights for one topology.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FillingSolution {
    pub length: f64,
    pub weights: Vec<f64>,
}

/// `minimize sum w` subject to `path_w(i, j) >= |ij|` and `w >= 0`.
///
/// Solved through its dual `maximize sum |ij| y_ij` subject to one `<= 1`
/// row per edge, whose origin is feasible; the edge weights are the dual's
/// multipliers.
pub fn solve_filling_lp(m: &FiniteMetricSpace, topo: &SteinerTopology) -> Result<FillingSolution> {
    let n = m.size();
    if topo.leaf_count != n {
        return Err(Error::DimensionMismatch(format!(
            "topology has {} leaves, space has {n} points",
            topo.leaf_count
        )));
    }
    if n < 2 {
        return Err(Error::TooFewPoints { what: "filling LP", n, min: 2 });
    }
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let paths: Vec<Vec<usize>> = pairs.iter().map(|&(i, j)| topo.path(i, j)).collect();
    let edge_count = topo.edges.len();
    // dual: variables = pairs, rows = edges
    let mut rows = vec![vec![0.0; pairs.len()]; edge_count];
    for (p, path) in paths.iter().enumerate() {
        for &e in path {
            rows[e][p] = 1.0;
        }
    }
    let c: Vec<f64> = pairs.iter().map(|&(i, j)| m.d(i, j)).collect();
    let sol = lp::maximize(&c, &rows, &vec![1.0; edge_count])?;
    let weights = sol.dual;
    if let Some(w) = weights.iter().find(|&&w| w < -1e-12) {
        return Err(Error::LpNumericalFailure(format!("negative edge weight {w}")));
    }
    for (p, path) in paths.iter().enumerate() {
        let len: f64 = path.iter().map(|&e| weights[e]).sum();
        if len < c[p] - 1e-9 {
            return Err(Error::LpNumericalFailure(format!(
                "path constraint {:?} violated by {}",
                pairs[p],
                c[p] - len
            )));
        }
    }
    Ok(FillingSolution { length: weights.iter().sum(), weights })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinimalFilling {
    pub length: f64,
    pub topology: SteinerTopology,
    pub weights: Vec<f64>,
}

/// `mf(M)`: the least filling-LP value over all binary topologies.
pub fn mf(m: &FiniteMetricSpace) -> Result<MinimalFilling> {
    mf_with(m, &Limits::default())
}

pub fn mf_with(m: &FiniteMetricSpace, limits: &Limits) -> Result<MinimalFilling> {
    let topologies = enumerate_topologies_with(m.size(), limits)?;
    let solutions = topologies
        .par_iter()
        .map(|t| solve_filling_lp(m, t))
        .collect::<Result<Vec<_>>>()?;
    let mut best = 0;
    for (i, s) in solutions.iter().enumerate() {
        if s.length < solutions[best].length {
            best = i;
        }
    }
    let FillingSolution { length, weights } = solutions[best].clone();
    Ok(MinimalFilling { length, topology: topologies[best].clone(), weights })
}

/// Largest terminal count accepted by [`mf_upper_bound_search`].
pub const SEARCH_MAX_POINTS: usize = 5;

#[derive(Debug, Clone, PartialEq)]
pub struct SearchOutcome {
    /// `sum_k [lambda - 2 d_GH(V, lambda Delta_{k+1})]` for the best extension.
    pub value: f64,
    /// `mst(V)` of the same extension, computed directly.
    pub mst_value: f64,
    pub extension: FiniteMetricSpace,
    pub d: f64,
    pub lambda: f64,
}

/// Draws a random extension of `m` by `extra` points, all distances in
/// `(0, cap]`, each new distance uniform in the interval the triangle
/// inequality leaves open. `None` if the cap leaves no room.
pub fn sample_extension<R: Rng + ?Sized>(
    m: &FiniteMetricSpace,
    extra: usize,
    cap: f64,
    rng: &mut R,
) -> Option<FiniteMetricSpace> {
    let n = m.size();
    let total = n + extra;
    let mut d = vec![vec![0.0; total]; total];
    for i in 0..n {
        for j in 0..n {
            d[i][j] = m.d(i, j);
        }
    }
    let floor = 1e-9 * cap.max(f64::MIN_POSITIVE);
    for p in n..total {
        for q in 0..p {
            let mut lo: f64 = floor;
            let mut hi = cap;
            for r in 0..q {
                lo = lo.max((d[p][r] - d[q][r]).abs());
                hi = hi.min(d[p][r] + d[q][r]);
            }
            if lo > hi {
                return None;
            }
            let v = if hi > lo { rng.random_range(lo..=hi) } else { lo };
            d[p][q] = v;
            d[q][p] = v;
        }
    }
    extend_labels(m, &d).ok()
}

fn extend_labels(m: &FiniteMetricSpace, d: &[Vec<f64>]) -> Result<FiniteMetricSpace> {
    let mut labels = m.labels().to_vec();
    for k in m.size()..d.len() {
        let mut label = format!("s{}", k - m.size() + 1);
        while labels.contains(&label) {
            label.push('\'');
        }
        labels.push(label);
    }
    FiniteMetricSpace::new(labels, d)
}

/// Pattern search on the distances that involve extension points, accepting
/// moves that keep a valid metric with diameter at most `cap` and lower
/// `mst(V)`.
fn refine<R: Rng + ?Sized>(v: FiniteMetricSpace, n: usize, cap: f64, rng: &mut R, budget: usize) -> FiniteMetricSpace {
    let total = v.size();
    if total == n {
        return v;
    }
    let coords: Vec<(usize, usize)> = (n..total).flat_map(|p| (0..p).map(move |q| (p, q))).collect();
    let dim = coords.len();
    let mut directions: Vec<Vec<f64>> = Vec::new();
    if dim <= 3 {
        for code in 0..3usize.pow(dim as u32) {
            let mut c = code;
            let dir: Vec<f64> = (0..dim)
                .map(|_| {
                    let s = (c % 3) as f64 - 1.0;
                    c /= 3;
                    s
                })
                .collect();
            if dir.iter().any(|&s| s != 0.0) {
                directions.push(dir);
            }
        }
    } else {
        for i in 0..dim {
            for s in [-1.0, 1.0] {
                let mut dir = vec![0.0; dim];
                dir[i] = s;
                directions.push(dir);
            }
        }
        for _ in 0..2 * dim {
            directions.push((0..dim).map(|_| rng.random_range(-1..=1) as f64).collect());
        }
    }
    let mut matrix = v.matrix();
    let mut best = v;
    let mut best_len = mst_length(&best);
    let mut step = cap / 4.0;
    let mut evals = 0;
    while step > 1e-12 * cap && evals < budget {
        let mut improved = false;
        for dir in &directions {
            let mut trial = matrix.clone();
            let mut ok = true;
            for (&(p, q), &s) in coords.iter().zip(dir) {
                let val = trial[p][q] + s * step;
                if !(val > 0.0) || val > cap {
                    ok = false;
                    break;
                }
                trial[p][q] = val;
                trial[q][p] = val;
            }
            if !ok {
                continue;
            }
            evals += 1;
            if let Ok(cand) = FiniteMetricSpace::new(best.labels().to_vec(), &trial) {
                let len = mst_length(&cand);
                if len < best_len {
                    best_len = len;
                    best = cand;
                    matrix = trial;
                    improved = true;
                    break;
                }
            }
        }
        if !improved {
            step /= 2.0;
        }
    }
    best
}

/// Randomized search for a short `mst(V)` over extensions `V ⊇ m` with
/// `#V <= 2#m - 2` and `diam V <= d`.
///
/// Each iteration draws its own random stream from `(seed, iteration)`, so
/// the result does not depend on how iterations are scheduled. Iteration 0
/// always evaluates `V = m`. The returned value is an upper bound on `mf(m)`.
pub fn mf_upper_bound_search(
    m: &FiniteMetricSpace,
    d: Option<f64>,
    iterations: usize,
    seed: u64,
) -> Result<SearchOutcome> {
    let n = m.size();
    if iterations == 0 {
        return Err(Error::InvalidIterations);
    }
    if n > SEARCH_MAX_POINTS {
        return Err(Error::SizeLimitExceeded { what: "filling search", n, limit: SEARCH_MAX_POINTS });
    }
    let diam = diameter(m);
    let d = d.unwrap_or((n.saturating_sub(1)) as f64 * diam * (1.0 + 1e-9));
    if d < diam {
        return Err(Error::EmptyCandidateSet);
    }
    let lambda = if d > 0.0 { 2.0 * d } else { 1.0 };
    let max_extra = n.saturating_sub(2);

    let candidates: Vec<(usize, FiniteMetricSpace)> = (0..iterations)
        .into_par_iter()
        .filter_map(|it| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(it as u64);
            let extra = if it == 0 { 0 } else { rng.random_range(0..=max_extra) };
            let v = sample_extension(m, extra, d, &mut rng)?;
            Some((it, refine(v, n, d, &mut rng, 600)))
        })
        .collect();

    let mut best: Option<(f64, &FiniteMetricSpace)> = None;
    for (_, v) in &candidates {
        let len = mst_length(v);
        if best.is_none_or(|(b, _)| len < b) {
            best = Some((len, v));
        }
    }
    let (mst_value, extension) = best.expect("iteration 0 always yields V = M");
    let value = if extension.size() > 1 { mst_length_via_gh(extension, lambda)? } else { 0.0 };
    Ok(SearchOutcome { value, mst_value, extension: extension.clone(), d, lambda })
}
