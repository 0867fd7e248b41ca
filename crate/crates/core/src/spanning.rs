//! Minimum spanning trees, the mst-spectrum, and exhaustive tree enumeration.

use std::cmp::Ordering;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::metric::FiniteMetricSpace;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub length: f64,
}

/// A tree on a subset of a space's points.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightedTree {
    pub vertices: Vec<usize>,
    pub edges: Vec<Edge>,
    pub total_length: f64,
}

impl WeightedTree {
    fn from_edges(vertices: Vec<usize>, edges: Vec<Edge>) -> Self {
        let total_length = edges.iter().map(|e| e.length).sum();
        WeightedTree { vertices, edges, total_length }
    }

    /// Edge lengths sorted descending.
    pub fn sorted_lengths(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.edges.iter().map(|e| e.length).collect();
        v.sort_by(|a, b| b.total_cmp(a));
        v
    }
}

/// Descending MST edge lengths.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Spectrum(pub Vec<f64>);

impl Spectrum {
    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `sigma_k`, 1-based.
    pub fn sigma(&self, k: usize) -> Option<f64> {
        k.checked_sub(1).and_then(|i| self.0.get(i).copied())
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }
}

pub(crate) struct DisjointSets {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl DisjointSets {
    pub(crate) fn new(n: usize) -> Self {
        DisjointSets { parent: (0..n).collect(), rank: vec![0; n] }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (a, b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        match self.rank[a].cmp(&self.rank[b]) {
            Ordering::Less => self.parent[a] = b,
            Ordering::Greater => self.parent[b] = a,
            Ordering::Equal => {
                self.parent[b] = a;
                self.rank[a] += 1;
            }
        }
        true
    }
}

/// All pairs `(i, j)`, `i < j`, sorted by (length, i, j).
pub(crate) fn sorted_edges(x: &FiniteMetricSpace) -> Vec<Edge> {
    let n = x.size();
    let mut edges = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for u in 0..n {
        for v in u + 1..n {
            edges.push(Edge { u, v, length: x.d(u, v) });
        }
    }
    edges.sort_by(|a, b| {
        a.length
            .total_cmp(&b.length)
            .then(a.u.cmp(&b.u))
            .then(a.v.cmp(&b.v))
    });
    edges
}

/// Kruskal's algorithm; edges of the result appear in insertion order.
pub fn minimum_spanning_tree(x: &FiniteMetricSpace) -> WeightedTree {
    let n = x.size();
    let mut sets = DisjointSets::new(n);
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    for e in sorted_edges(x) {
        if sets.union(e.u, e.v) {
            edges.push(e);
            if edges.len() + 1 == n {
                break;
            }
        }
    }
    WeightedTree::from_edges((0..n).collect(), edges)
}

pub fn mst_length(x: &FiniteMetricSpace) -> f64 {
    minimum_spanning_tree(x).total_length
}

pub fn mst_spectrum(x: &FiniteMetricSpace) -> Spectrum {
    Spectrum(minimum_spanning_tree(x).sorted_lengths())
}

/// Decodes a Prüfer sequence over `0..seq.len() + 2` into tree edges.
pub fn prufer_decode(seq: &[usize]) -> Vec<(usize, usize)> {
    let n = seq.len() + 2;
    let mut degree = vec![1usize; n];
    for &s in seq {
        degree[s] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &s in seq {
        let leaf = (0..n).find(|&i| degree[i] == 1).expect("a leaf always exists");
        edges.push((leaf.min(s), leaf.max(s)));
        degree[leaf] -= 1;
        degree[s] -= 1;
    }
    let mut rest = (0..n).filter(|&i| degree[i] == 1);
    let (a, b) = (rest.next().unwrap(), rest.next().unwrap());
    edges.push((a, b));
    edges
}

/// Every labeled spanning tree of the complete graph on `x`, one per Prüfer
/// sequence, in lexicographic sequence order.
pub fn all_spanning_trees(x: &FiniteMetricSpace) -> Result<Vec<WeightedTree>> {
    all_spanning_trees_with(x, &Limits::default())
}

pub fn all_spanning_trees_with(x: &FiniteMetricSpace, limits: &Limits) -> Result<Vec<WeightedTree>> {
    let n = x.size();
    if n > limits.max_n {
        return Err(Error::SizeLimitExceeded { what: "spanning-tree enumeration", n, limit: limits.max_n });
    }
    if n < 2 {
        return Err(Error::TooFewPoints { what: "spanning-tree enumeration", n, min: 2 });
    }
    let len = n - 2;
    let mut seq = vec![0usize; len];
    let mut out = Vec::with_capacity(n.pow(len as u32));
    loop {
        let edges = prufer_decode(&seq)
            .into_iter()
            .map(|(u, v)| Edge { u, v, length: x.d(u, v) })
            .collect();
        out.push(WeightedTree::from_edges((0..n).collect(), edges));
        // odometer increment
        let mut pos = len;
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            seq[pos] += 1;
            if seq[pos] < n {
                break;
            }
            seq[pos] = 0;
        }
    }
}

/// Spanning trees whose length is within `1e-12` (relative) of the minimum.
pub fn all_minimum_spanning_trees(x: &FiniteMetricSpace) -> Result<Vec<WeightedTree>> {
    all_minimum_spanning_trees_with(x, &Limits::default())
}

pub fn all_minimum_spanning_trees_with(
    x: &FiniteMetricSpace,
    limits: &Limits,
) -> Result<Vec<WeightedTree>> {
    if x.size() == 1 {
        return Ok(vec![minimum_spanning_tree(x)]);
    }
    let trees = all_spanning_trees_with(x, limits)?;
    let best = trees.iter().map(|t| t.total_length).fold(f64::INFINITY, f64::min);
    let tol = 1e-12 * best.max(1.0);
    Ok(trees.into_iter().filter(|t| t.total_length <= best + tol).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::fixtures::*;
    use crate::metric::scale;
    use crate::sample;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn is_spanning_tree(t: &WeightedTree, n: usize) -> bool {
        let mut sets = DisjointSets::new(n);
        t.edges.len() + 1 == n && t.edges.iter().all(|e| sets.union(e.u, e.v))
    }

    #[test]
    fn two_point_tree() {
        let x = FiniteMetricSpace::from_matrix(&[vec![0.0, 2.5], vec![2.5, 0.0]]).unwrap();
        let t = minimum_spanning_tree(&x);
        assert_eq!(t.edges, [Edge { u: 0, v: 1, length: 2.5 }]);
        assert_eq!(mst_spectrum(&x).values(), [2.5]);
    }

    #[test]
    fn w4_tree() {
        let t = minimum_spanning_tree(&w4());
        let pairs: Vec<_> = t.edges.iter().map(|e| (e.u, e.v)).collect();
        assert_eq!(pairs, [(0, 1), (2, 3), (1, 2)]);
        assert!((t.total_length - 0.45).abs() < 1e-15);
        assert_eq!(mst_spectrum(&w4()).values(), [0.2, 0.15, 0.1]);
    }

    #[test]
    fn degenerate_and_simplex() {
        let p = FiniteMetricSpace::point("x");
        assert_eq!(mst_length(&p), 0.0);
        assert!(mst_spectrum(&p).is_empty());
        assert_eq!(mst_length(&delta(4, 1.0)), 3.0);
        assert_eq!(mst_length(&delta(6, 0.5)), 2.5);
        assert_eq!(mst_spectrum(&delta(5, 1.0)).values(), [1.0; 4]);
    }

    #[test]
    fn cayley_counts() {
        let limits = Limits::default();
        for (n, count) in [(2, 1), (3, 3), (4, 16), (5, 125), (6, 1296)] {
            let trees = all_spanning_trees_with(&delta(n, 1.0), &limits).unwrap();
            assert_eq!(trees.len(), count);
            assert!(trees.iter().all(|t| is_spanning_tree(t, n)));
            let mut keys: Vec<Vec<(usize, usize)>> = trees
                .iter()
                .map(|t| {
                    let mut k: Vec<_> = t.edges.iter().map(|e| (e.u, e.v)).collect();
                    k.sort();
                    k
                })
                .collect();
            keys.sort();
            keys.dedup();
            assert_eq!(keys.len(), count, "trees must be distinct");
        }
        assert!(matches!(
            all_spanning_trees(&delta(9, 1.0)),
            Err(Error::SizeLimitExceeded { n: 9, limit: 8, .. })
        ));
    }

    #[test]
    fn minimum_tree_sets() {
        assert_eq!(all_minimum_spanning_trees(&delta(4, 1.0)).unwrap().len(), 16);
        assert_eq!(all_minimum_spanning_trees(&w4()).unwrap().len(), 1);
        let tied = FiniteMetricSpace::from_matrix(&[
            vec![0.0, 1.0, 1.5],
            vec![1.0, 0.0, 1.0],
            vec![1.5, 1.0, 0.0],
        ])
        .unwrap();
        let msts = all_minimum_spanning_trees(&tied).unwrap();
        assert_eq!(msts.len(), 1);
        let tied = FiniteMetricSpace::from_matrix(&[
            vec![0.0, 1.0, 1.0],
            vec![1.0, 0.0, 1.5],
            vec![1.0, 1.5, 0.0],
        ])
        .unwrap();
        let msts = all_minimum_spanning_trees(&tied).unwrap();
        assert_eq!(msts.len(), 1);
        let tied = FiniteMetricSpace::from_matrix(&[
            vec![0.0, 1.0, 1.0, 1.0],
            vec![1.0, 0.0, 1.5, 1.5],
            vec![1.0, 1.5, 0.0, 1.0],
            vec![1.0, 1.5, 1.0, 0.0],
        ])
        .unwrap();
        let msts = all_minimum_spanning_trees(&tied).unwrap();
        assert!(msts.len() >= 2);
        for t in &msts {
            assert_eq!(t.sorted_lengths(), [1.0, 1.0, 1.0]);
        }
    }

    #[test]
    fn kruskal_matches_enumeration_and_spectra_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for trial in 0..150 {
            let n = 2 + trial % 6;
            let x = if trial % 2 == 0 {
                sample::random_metric(&mut rng, n)
            } else {
                sample::random_metric_with_ties(&mut rng, n)
            };
            let t = minimum_spanning_tree(&x);
            assert!(is_spanning_tree(&t, n));
            let all = all_spanning_trees(&x).unwrap();
            let best = all.iter().map(|t| t.total_length).fold(f64::INFINITY, f64::min);
            assert!((t.total_length - best).abs() <= 1e-12);
            let spectrum = mst_spectrum(&x);
            assert!((spectrum.sum() - t.total_length).abs() <= 1e-12);
            assert!(spectrum.values().windows(2).all(|w| w[0] >= w[1]));
            for m in all_minimum_spanning_trees(&x).unwrap() {
                assert_eq!(m.sorted_lengths(), spectrum.values());
            }
            let lam = 3.7;
            let scaled = mst_length(&scale(&x, lam).unwrap());
            assert!((scaled - lam * t.total_length).abs() <= 1e-12 * scaled);
        }
    }
}
