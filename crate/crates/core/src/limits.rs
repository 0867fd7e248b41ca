//! Size caps for the exponential enumerations.
//!
//! Every exhaustive routine refuses inputs beyond its cap with
//! [`Error::SizeLimitExceeded`](crate::Error::SizeLimitExceeded) instead of
//! running for hours. The defaults can be overridden through the environment
//! (`GHMST_MAX_EXHAUSTIVE`, `GHMST_MAX_N`) or by constructing a value directly.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct Limits {
    /// Cap on `|X| * |Y|` for exhaustive correspondence enumeration.
    pub max_exhaustive_product: usize,
    /// Cap on the size of either space for branch-and-bound GH search,
    /// and on `n` for spanning-tree enumeration.
    pub max_n: usize,
    /// Cap on `n` for partition enumeration.
    pub max_partition_n: usize,
    /// Cap on the leaf count for Steiner topology enumeration.
    pub max_topology_leaves: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_exhaustive_product: 24,
            max_n: 8,
            max_partition_n: 12,
            max_topology_leaves: 7,
        }
    }
}

impl Limits {
    /// Defaults overridden by `GHMST_MAX_EXHAUSTIVE` and `GHMST_MAX_N` when set.
    pub fn from_env() -> Self {
        let mut limits = Limits::default();
        if let Some(v) = env_usize("GHMST_MAX_EXHAUSTIVE") {
            limits.max_exhaustive_product = v;
        }
        if let Some(v) = env_usize("GHMST_MAX_N") {
            limits.max_n = v;
        }
        limits
    }
}

fn env_usize(key: &str) -> Option<usize> {
    std::env::var(key).ok().and_then(|s| s.trim().parse().ok())
}
