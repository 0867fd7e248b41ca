//! Minimum-spanning-tree spectra of finite metric spaces.
//!
//! The spectrum of a finite metric space (the descending edge lengths of any
//! minimum spanning tree) is computed three independent ways:
//!
//! * directly from a minimum spanning tree ([`spanning`]),
//! * as a max-min over partitions into `k + 1` blocks ([`partitions`]),
//! * from Gromov-Hausdorff distances to large simplices ([`gh`]).
//!
//! On top of that the crate computes exact Gromov-Hausdorff distances between
//! small spaces, Steiner-minimal-tree lengths inside finite ambient spaces
//! ([`steiner`]) and minimal-filling lengths ([`filling`]).

// NaN must fail the range checks, hence `!(x > 0.0)` style tests.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod error;
pub mod filling;
pub mod gh;
pub mod io;
pub mod limits;
pub mod lp;
pub mod metric;
pub mod partitions;
pub mod sample;
pub mod spanning;
pub mod steiner;

pub use error::{Error, ErrorCategory, Result};
pub use limits::Limits;
pub use metric::{
    diameter, hausdorff_distance, scale, set_distance, simplex, validate_metric, FiniteMetricSpace,
    SimplexSpec,
};
pub use spanning::{
    all_minimum_spanning_trees, all_spanning_trees, minimum_spanning_tree, mst_length,
    mst_spectrum, Edge, Spectrum, WeightedTree,
};
