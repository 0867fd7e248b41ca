//! Steiner minimal trees for terminals inside a finite ambient space.
//!
//! In a finite ambient space `X` the shortest connected graph joining `M` is
//! a minimum spanning tree of some `V` with `M ⊆ V ⊆ X` and `#V <= 2#M - 2`,
//! so enumerating those supersets is exact.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gh::mst_length_via_gh;
use crate::metric::{diameter, FiniteMetricSpace};
use crate::spanning::{minimum_spanning_tree, Edge, WeightedTree};

#[derive(Debug, Clone, PartialEq)]
pub struct SteinerInstance {
    ambient: FiniteMetricSpace,
    terminals: Vec<usize>,
}

impl SteinerInstance {
    pub fn new(ambient: FiniteMetricSpace, mut terminals: Vec<usize>) -> Result<Self> {
        if terminals.is_empty() {
            return Err(Error::InvalidTerminals("no terminals".into()));
        }
        if let Some(&index) = terminals.iter().find(|&&t| t >= ambient.size()) {
            return Err(Error::IndexOutOfRange { index, size: ambient.size() });
        }
        terminals.sort_unstable();
        if terminals.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidTerminals("repeated terminal".into()));
        }
        Ok(SteinerInstance { ambient, terminals })
    }

    pub fn from_labels(ambient: FiniteMetricSpace, labels: &[&str]) -> Result<Self> {
        let terminals = labels
            .iter()
            .map(|l| ambient.index_of(l).ok_or_else(|| Error::UnknownLabel(l.to_string())))
            .collect::<Result<Vec<_>>>()?;
        Self::new(ambient, terminals)
    }

    pub fn ambient(&self) -> &FiniteMetricSpace {
        &self.ambient
    }

    pub fn terminals(&self) -> &[usize] {
        &self.terminals
    }

    pub fn terminal_space(&self) -> FiniteMetricSpace {
        self.ambient.subspace(&self.terminals).expect("terminals are valid indices")
    }

    /// `(n - 1) diam M`, bumped by a relative `1e-9` to make `d > smt` strict.
    pub fn default_d(&self) -> f64 {
        let n = self.terminals.len();
        (n.saturating_sub(1)) as f64 * diameter(&self.terminal_space()) * (1.0 + 1e-9)
    }
}

/// A candidate vertex set: ambient indices (ascending) and the subspace on them.
#[derive(Debug, Clone, PartialEq)]
pub struct Superset {
    pub indices: Vec<usize>,
    pub space: FiniteMetricSpace,
}

/// Every `V` with `M ⊆ V ⊆ X` and `#V <= max(2n - 2, n)`, optionally limited
/// to `diam V <= d`. Ordered by the number of added points, then
/// lexicographically by the added indices.
pub fn enumerate_supersets(inst: &SteinerInstance, d: Option<f64>) -> impl Iterator<Item = Superset> + '_ {
    let n = inst.terminals.len();
    let others: Vec<usize> = (0..inst.ambient.size())
        .filter(|i| inst.terminals.binary_search(i).is_err())
        .collect();
    let max_added = n.saturating_sub(2).min(others.len());
    let pool = others.len();
    (0..=max_added)
        .flat_map(move |j| combinations(pool, j))
        .map(move |combo| {
            let mut indices = inst.terminals.clone();
            indices.extend(combo.iter().map(|&c| others[c]));
            indices.sort_unstable();
            let space = inst.ambient.subspace(&indices).expect("valid indices");
            Superset { indices, space }
        })
        .filter(move |s| d.is_none_or(|d| diameter(&s.space) <= d))
}

/// `k`-subsets of `0..n` in lexicographic order.
fn combinations(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut cur: Option<Vec<usize>> = (k <= n).then(|| (0..k).collect());
    std::iter::from_fn(move || {
        let out = cur.clone()?;
        let mut next = out.clone();
        let mut i = k;
        cur = loop {
            if i == 0 {
                break None;
            }
            i -= 1;
            if next[i] < n - k + i {
                next[i] += 1;
                for p in i + 1..k {
                    next[p] = next[p - 1] + 1;
                }
                break Some(next);
            }
        };
        Some(out)
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SteinerResult {
    pub length: f64,
    pub vertex_set: Superset,
    /// MST of the vertex set, with ambient indices.
    pub tree: WeightedTree,
}

fn lift_tree(tree: WeightedTree, indices: &[usize]) -> WeightedTree {
    WeightedTree {
        vertices: indices.to_vec(),
        edges: tree
            .edges
            .iter()
            .map(|e| Edge { u: indices[e.u], v: indices[e.v], length: e.length })
            .collect(),
        total_length: tree.total_length,
    }
}

/// First minimum of `values`, or `None` if empty.
fn argmin(values: &[f64]) -> Option<usize> {
    values
        .iter()
        .enumerate()
        .fold(None, |best: Option<(usize, f64)>, (i, &v)| match best {
            Some((_, b)) if b <= v => best,
            _ => Some((i, v)),
        })
        .map(|(i, _)| i)
}

/// `smt(M, X) = min mst(V)` over the supersets.
pub fn smt_finite_ambient(inst: &SteinerInstance) -> SteinerResult {
    let candidates: Vec<Superset> = enumerate_supersets(inst, None).collect();
    let trees: Vec<WeightedTree> = candidates.par_iter().map(|s| minimum_spanning_tree(&s.space)).collect();
    let lengths: Vec<f64> = trees.iter().map(|t| t.total_length).collect();
    let best = argmin(&lengths).expect("V = M is always a candidate");
    let vertex_set = candidates[best].clone();
    let tree = lift_tree(trees[best].clone(), &vertex_set.indices);
    SteinerResult { length: lengths[best], vertex_set, tree }
}

/// `smt(M, X)` as the minimum over `V` with `diam V <= d` of the
/// Gromov-Hausdorff sum `sum_k [lambda - 2 d_GH(V, lambda Delta_{k+1})]`.
pub fn smt_via_gh(inst: &SteinerInstance, d: Option<f64>, lambda: Option<f64>) -> Result<f64> {
    let d = d.unwrap_or_else(|| inst.default_d());
    let lambda = lambda.unwrap_or(if d > 0.0 { 2.0 * d } else { 1.0 });
    if lambda < 2.0 * d {
        return Err(Error::LambdaTooSmall { lambda, required: 2.0 * d });
    }
    if !(lambda > 0.0) {
        return Err(Error::NonpositiveLambda(lambda));
    }
    let candidates: Vec<Superset> = enumerate_supersets(inst, Some(d)).collect();
    if candidates.is_empty() {
        return Err(Error::EmptyCandidateSet);
    }
    let values = candidates
        .par_iter()
        .map(|s| mst_length_via_gh(&s.space, lambda))
        .collect::<Result<Vec<f64>>>()?;
    Ok(values[argmin(&values).expect("nonempty")])
}
