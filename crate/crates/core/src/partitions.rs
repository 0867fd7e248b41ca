//! Partitions into exactly `k` blocks and the max-min characterization of the spectrum.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::metric::{set_distance, FiniteMetricSpace};
use crate::spanning::{minimum_spanning_tree, DisjointSets};

/// A partition of `0..n` into nonempty blocks, blocks ordered by minimal element.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Partition {
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    /// Builds from a restricted growth string (`rgs[i]` is the block of `i`).
    pub fn from_rgs(rgs: &[usize]) -> Self {
        let k = rgs.iter().copied().max().map_or(0, |m| m + 1);
        let mut blocks = vec![Vec::new(); k];
        for (i, &b) in rgs.iter().enumerate() {
            blocks[b].push(i);
        }
        Partition { blocks }
    }

    /// Canonicalizes arbitrary blocks; errors unless they partition `0..n`.
    pub fn from_blocks(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut owner = vec![usize::MAX; n];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::EmptySubset);
            }
            for &i in block {
                if i >= n {
                    return Err(Error::IndexOutOfRange { index: i, size: n });
                }
                if owner[i] != usize::MAX {
                    return Err(Error::PartitionMismatch { expected: n, got: n + 1 });
                }
                owner[i] = b;
            }
        }
        if owner.contains(&usize::MAX) {
            let got = owner.iter().filter(|&&o| o != usize::MAX).count();
            return Err(Error::PartitionMismatch { expected: n, got });
        }
        let mut blocks = blocks;
        for b in &mut blocks {
            b.sort_unstable();
        }
        blocks.sort_by_key(|b| b[0]);
        Ok(Partition { blocks })
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn k(&self) -> usize {
        self.blocks.len()
    }

    pub fn ground_size(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    pub fn rgs(&self) -> Vec<usize> {
        let mut out = vec![0; self.ground_size()];
        for (b, block) in self.blocks.iter().enumerate() {
            for &i in block {
                out[i] = b;
            }
        }
        out
    }
}

/// Restricted growth strings of length `n` using exactly `k` values, in
/// lexicographic order.
#[derive(Debug, Clone)]
pub struct RestrictedGrowthStrings {
    a: Vec<usize>,
    k: usize,
    fresh: bool,
    done: bool,
}

impl RestrictedGrowthStrings {
    fn new(n: usize, k: usize) -> Self {
        let mut a = vec![0; n];
        // smallest string: zeros, then 1..k-1 at the tail
        for b in 1..k {
            a[n - k + b] = b;
        }
        RestrictedGrowthStrings { a, k, fresh: true, done: false }
    }

    /// Advances to the next string; returns `false` when exhausted.
    pub fn advance(&mut self) -> bool {
        if self.done {
            return false;
        }
        if self.fresh {
            self.fresh = false;
            return true;
        }
        let n = self.a.len();
        let k = self.k;
        // prefix maxima: pm[i] = max(a[0..i]), with pm[0] treated as "no prefix"
        let mut pm = vec![0usize; n];
        for i in 1..n {
            pm[i] = pm[i - 1].max(self.a[i - 1]);
        }
        for i in (1..n).rev() {
            let next = self.a[i] + 1;
            if next > k - 1 || next > pm[i] + 1 {
                continue;
            }
            let m = pm[i].max(next);
            let remaining = n - 1 - i;
            let need = k - 1 - m;
            if need > remaining {
                continue;
            }
            self.a[i] = next;
            for p in i + 1..n {
                self.a[p] = 0;
            }
            for b in 0..need {
                self.a[n - need + b] = m + 1 + b;
            }
            return true;
        }
        self.done = true;
        false
    }

    pub fn current(&self) -> &[usize] {
        &self.a
    }
}

impl Iterator for RestrictedGrowthStrings {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        self.advance().then(|| Partition::from_rgs(&self.a))
    }
}

fn check_nk(n: usize, k: usize, limits: &Limits) -> Result<()> {
    if n > limits.max_partition_n {
        return Err(Error::SizeLimitExceeded {
            what: "partition enumeration",
            n,
            limit: limits.max_partition_n,
        });
    }
    if k < 1 || k > n {
        return Err(Error::InvalidK { n, k });
    }
    Ok(())
}

/// Streams every partition of `0..n` into exactly `k` nonempty blocks.
pub fn enumerate_partitions(n: usize, k: usize) -> Result<RestrictedGrowthStrings> {
    enumerate_partitions_with(n, k, &Limits::default())
}

pub fn enumerate_partitions_with(n: usize, k: usize, limits: &Limits) -> Result<RestrictedGrowthStrings> {
    check_nk(n, k, limits)?;
    Ok(RestrictedGrowthStrings::new(n, k))
}

/// Minimum distance between distinct blocks.
pub fn alpha(x: &FiniteMetricSpace, d: &Partition) -> Result<f64> {
    if d.ground_size() != x.size() {
        return Err(Error::PartitionMismatch { expected: x.size(), got: d.ground_size() });
    }
    if d.k() < 2 {
        return Err(Error::SingleBlock);
    }
    let mut best = f64::INFINITY;
    for (i, a) in d.blocks.iter().enumerate() {
        for b in &d.blocks[i + 1..] {
            best = best.min(set_distance(x, a, b)?);
        }
    }
    Ok(best)
}

/// `alpha` evaluated straight from a block-assignment string.
fn alpha_rgs(x: &FiniteMetricSpace, rgs: &[usize]) -> f64 {
    let n = rgs.len();
    let mut best = f64::INFINITY;
    for i in 0..n {
        for j in i + 1..n {
            if rgs[i] != rgs[j] {
                best = best.min(x.d(i, j));
            }
        }
    }
    best
}

/// `max alpha(D)` over all partitions `D` into `k + 1` blocks, i.e. `sigma_k`.
pub fn spectrum_via_partitions(x: &FiniteMetricSpace, k: usize) -> Result<f64> {
    spectrum_via_partitions_with(x, k, &Limits::default())
}

pub fn spectrum_via_partitions_with(x: &FiniteMetricSpace, k: usize, limits: &Limits) -> Result<f64> {
    let n = x.size();
    if n > limits.max_partition_n {
        return Err(Error::SizeLimitExceeded {
            what: "partition enumeration",
            n,
            limit: limits.max_partition_n,
        });
    }
    if k < 1 || k + 1 > n {
        return Err(Error::IndexOutOfRange { index: k, size: n.saturating_sub(1) });
    }
    let mut stream = enumerate_partitions_with(n, k + 1, limits)?;
    let mut best = f64::NEG_INFINITY;
    while stream.advance() {
        best = best.max(alpha_rgs(x, stream.current()));
    }
    Ok(best)
}

/// The whole spectrum via partitions, `sigma_1..sigma_{n-1}`.
pub fn spectrum_vector_via_partitions(x: &FiniteMetricSpace, limits: &Limits) -> Result<Vec<f64>> {
    (1..x.size()).map(|k| spectrum_via_partitions_with(x, k, limits)).collect()
}

/// Components left after deleting the `k` longest edges of the deterministic
/// minimum spanning tree (the last `k` edges in insertion order).
pub fn induced_partition(x: &FiniteMetricSpace, k: usize) -> Result<Partition> {
    let n = x.size();
    if k + 1 > n {
        return Err(Error::InvalidK { n, k: k + 1 });
    }
    let tree = minimum_spanning_tree(x);
    let keep = tree.edges.len() - k;
    let mut sets = DisjointSets::new(n);
    for e in &tree.edges[..keep] {
        sets.union(e.u, e.v);
    }
    let mut root_block = vec![usize::MAX; n];
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        let r = sets.find(i);
        if root_block[r] == usize::MAX {
            root_block[r] = blocks.len();
            blocks.push(Vec::new());
        }
        blocks[root_block[r]].push(i);
    }
    Ok(Partition { blocks })
}
